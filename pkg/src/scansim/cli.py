"""Command-line entry points: sweeps, capacity tables, engine agreement, demo server.

Every experiment flag mirrors a field of
:class:`~scansim.experiments.ExperimentSpec`; a JSON configuration file
(``--spec``) supplies defaults that individual flags override.  Exit codes
follow convention: 0 on success, 1 on configuration errors, and — for
``validate`` — 1 whenever the engines disagree.
"""

from __future__ import annotations

from typing import Union

import click

from .experiments import (
    DELAY_RULES,
    ENGINES,
    MODES,
    SWEEP_PARAMS,
    CapacityRow,
    ConfigurationError,
    ExperimentSpec,
    SweepRange,
    capacity_table,
    run_sweep,
    validate_run,
)


@click.group()
def main() -> None:
    """Scanning text-entry simulator: exact chains, Monte Carlo, live demo."""


def _spec_options(fn):
    """Attach the ExperimentSpec-mirroring flags to a command."""
    options = [
        click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False),
                     default=None, help="JSON experiment configuration; flags override its fields."),
        click.option("--phrase", default=None, help="Text to write, terminators included."),
        click.option("--param", "sweep_param", type=click.Choice(SWEEP_PARAMS), default=None,
                     help="Swept parameter."),
        click.option("--start", type=float, default=None, help="First swept value."),
        click.option("--stop", type=float, default=None, help="Last swept value (inclusive)."),
        click.option("--step", type=float, default=None, help="Increment between swept values."),
        click.option("--mode", type=click.Choice(MODES), default=None,
                     help="Scanning mode(s) to evaluate."),
        click.option("--layout", default=None,
                     help="Layout file path or bundled layout name."),
        click.option("--engine", type=click.Choice(ENGINES), default=None,
                     help="Exact recursions, Monte Carlo, or both side by side."),
        click.option("--delay-rule", type=click.Choice(DELAY_RULES), default=None,
                     help="How the dwell reacts to the click latency."),
        click.option("--latency", type=click.Choice(("shifted", "compensated")), default=None,
                     help="Whether decision windows correct for the click latency."),
        click.option("--delta", type=float, default=None, help="Click latency, seconds."),
        click.option("--sigma", type=float, default=None, help="Click-timing spread, seconds."),
        click.option("--sigma-fraction", type=float, default=None,
                     help="Click-timing spread as a fraction of the dwell."),
        click.option("--f", type=float, default=None, help="Probability a true click is dropped."),
        click.option("--lam", "--lambda", "lam", type=float, default=None,
                     help="False-positive rate, clicks per second."),
        click.option("--t-scan", type=float, default=None, help="Standard dwell, seconds."),
        click.option("--t-fast", type=float, default=None, help="Reduced dwell, seconds."),
        click.option("--undo-window", type=int, default=None,
                     help="Column group scans waited out to undo a wrong row."),
        click.option("--error-limit", type=int, default=None,
                     help="Spurious letters tolerated before failure."),
        click.option("--kappa", type=float, default=None, help="Scan-budget multiplier."),
        click.option("--seed", "seeds", type=int, multiple=True,
                     help="Sampling seed; repeatable."),
        click.option("--runs", type=int, default=None, help="Monte Carlo sessions per point."),
        click.option("--out", "output", type=click.Path(), default=None,
                     help="Write the table here instead of stdout."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _build_spec(kw: dict, default_engine: Union[str, None] = None) -> ExperimentSpec:
    """Merge a configuration file with command-line overrides."""
    spec_path = kw.pop("spec_path")
    seeds = kw.pop("seeds")
    start = kw.pop("start")
    stop = kw.pop("stop")
    step = kw.pop("step")
    overrides = {key: value for key, value in kw.items() if value is not None}
    if seeds:
        overrides["seeds"] = tuple(seeds)

    try:
        if spec_path is not None:
            spec = ExperimentSpec.from_json_file(spec_path)
            if any(v is not None for v in (start, stop, step)):
                base = spec.sweep
                overrides["sweep"] = SweepRange(
                    base.start if start is None else start,
                    base.stop if stop is None else stop,
                    base.step if step is None else step,
                )
            if default_engine and "engine" not in overrides and spec.engine != default_engine:
                overrides["engine"] = default_engine
            return spec.with_overrides(**overrides) if overrides else spec

        missing = [flag for flag, key in (
            ("--phrase", "phrase"),
            ("--param", "sweep_param"),
        ) if key not in overrides]
        if None in (start, stop, step):
            missing.append("--start/--stop/--step")
        if missing:
            raise click.ClickException(
                "either --spec or all of " + ", ".join(missing) + " must be given"
            )
        if default_engine:
            overrides.setdefault("engine", default_engine)
        return ExperimentSpec(sweep=SweepRange(start, stop, step), **overrides)
    except ConfigurationError as exc:
        raise click.ClickException(str(exc)) from exc


@main.command()
@_spec_options
def sweep(**kw) -> None:
    """Evaluate entry-rate metrics across a parameter sweep."""
    spec = _build_spec(kw)
    try:
        table = run_sweep(spec)
    except ConfigurationError as exc:
        raise click.ClickException(str(exc)) from exc
    if spec.output:
        path = table.write(spec.output)
        click.echo(f"wrote {len(table.rows)} rows to {path}")
    else:
        click.echo(table.to_csv(), nl=False)


_CAPACITY_COLUMNS = ("d", "g", "f", "beta_star", "rate_bits_per_s", "penalty",
                     "adjusted_rate_bits_per_s")


def _capacity_csv(row: CapacityRow) -> str:
    cells = (row.d, row.g, row.f, row.beta_star, row.rate, row.penalty, row.adjusted_rate)
    return (
        ",".join(_CAPACITY_COLUMNS)
        + "\n"
        + ",".join(format(c, ".12g") for c in cells)
        + "\n"
    )


@main.command()
@click.option("--d", type=float, required=True, help="Reaction delay, seconds.")
@click.option("--g", type=float, required=True, help="Click-precision granularity, seconds.")
@click.option("--f", type=float, default=0.0, show_default=True,
              help="Probability a click is dropped or fabricated.")
@click.option("--out", "output", type=click.Path(), default=None,
              help="Write the table here instead of stdout.")
def capacity(d: float, g: float, f: float, output: Union[str, None]) -> None:
    """Optimal stop probability and information rate of a self-paced button."""
    try:
        row = capacity_table(d, g, f)
    except ConfigurationError as exc:
        raise click.ClickException(str(exc)) from exc
    text = _capacity_csv(row)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
        click.echo(f"wrote capacity table to {output}")
    else:
        click.echo(text, nl=False)


@main.command()
@_spec_options
def validate(**kw) -> None:
    """Score the Monte Carlo engine against the exact distributions.

    Exits 0 only if at least 99% of the support points of every compared
    distribution sit within three standard errors.
    """
    spec = _build_spec(kw, default_engine="both")
    try:
        report = validate_run(spec)
    except ConfigurationError as exc:
        raise click.ClickException(str(exc)) from exc
    if spec.output:
        with open(spec.output, "w", encoding="utf-8") as fh:
            fh.write(report.to_text())
    click.echo(report.to_text(), nl=False)
    if not report.passed:
        raise SystemExit(1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True, help="Bind address.")
@click.option("--port", type=int, default=8000, show_default=True, envvar="SCANSIM_PORT",
              help="Bind port (SCANSIM_PORT environment variable overrides the default).")
def serve(host: str, port: int) -> None:
    """Launch the HTTP demo service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
