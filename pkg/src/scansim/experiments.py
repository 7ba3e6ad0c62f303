"""Configuration-driven parameter sweeps producing plot-ready tables.

An experiment fixes a scanning configuration, sweeps one timing or noise
parameter over a range, and evaluates entry-rate metrics at every point —
exactly (moment recursions on the word chains), by Monte Carlo sampling,
or both side by side.  Results land in a deterministic comma-separated
table whose commented header carries a fingerprint of the configuration,
so any table can be traced back to the exact settings that produced it.

The same configuration object drives the agreement checker
(:func:`validate_run`), which scores Monte Carlo histograms against the
exact distributions point by point, and the capacity helper
(:func:`capacity_table`), which reports the optimal stop probability of
the self-paced button model with the switch-noise penalty applied.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .capacity import noisy_factor, optimize_beta
from .chain import build_fast, build_slow
from .layout import (
    FastParams,
    GridLayout,
    builtin_layout,
    builtin_layout_names,
    load_layout,
    split_phrase,
)
from .montecarlo import CompareReport, compare, phrase_batch, run_batch
from .noise import ClickTiming, NoiseParams, SwitchNoise
from .pmf import count_moments, counts_pmf, errors_pmf, outcome_probabilities

__all__ = [
    "ConfigurationError",
    "SweepRange",
    "ExperimentSpec",
    "ResolvedPoint",
    "SweepTable",
    "CapacityRow",
    "PointComparison",
    "ValidationReport",
    "analytic_phrase_metrics",
    "resolve_layout",
    "resolve_point",
    "run_sweep",
    "capacity_table",
    "validate_run",
]

SWEEP_PARAMS = ("delta", "t_scan", "lambda", "sigma_fraction", "t_fast")
DELAY_RULES = ("fixed", "adaptive_plus", "adaptive_minus")
ENGINES = ("analytic", "montecarlo", "both")
MODES = ("slow", "fast", "both")

#: Count distributions scored by :func:`validate_run`.
VALIDATION_KINDS = ("scans", "clicks", "errors")

_DEFAULT_SIGMA = 0.05


class ConfigurationError(ValueError):
    """An experiment configuration that cannot be run, with a hint on how to fix it."""


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class SweepRange:
    """Inclusive arithmetic range ``start, start+step, ... <= stop``."""

    start: float
    stop: float
    step: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "stop", float(self.stop))
        object.__setattr__(self, "step", float(self.step))
        if not math.isfinite(self.start) or not math.isfinite(self.stop):
            raise ConfigurationError("sweep range endpoints must be finite")
        if self.step <= 0:
            raise ConfigurationError(f"sweep step must be positive, got {self.step:g}")
        if self.stop < self.start:
            raise ConfigurationError(
                f"sweep stop ({self.stop:g}) must not be below start ({self.start:g})"
            )

    def values(self) -> tuple[float, ...]:
        """The swept values, computed from the start to avoid drift."""
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return tuple(self.start + i * self.step for i in range(n))


@dataclass(frozen=True)
class ExperimentSpec:
    """Complete description of one sweep experiment.

    ``sweep_param`` names the swept quantity — one of ``delta`` (click
    latency, s), ``t_scan`` (standard dwell, s), ``lambda`` (false-positive
    rate, 1/s), ``sigma_fraction`` (click-timing spread as a fraction of
    the configured dwell), or ``t_fast`` (reduced dwell, s).  The remaining
    fields pin everything else.  ``sigma`` gives the click-timing spread in
    seconds; ``sigma_fraction`` gives it relative to the configured
    ``t_scan`` instead (at most one of the two may be set; with neither the
    spread defaults to ``0.05`` s).

    ``delay_rule`` sets the effective dwell at each point: ``fixed`` keeps
    ``t_scan``; ``adaptive_plus`` lengthens it to ``max(0.5, delta +
    3*sigma)``; ``adaptive_minus`` shortens it to ``delta - 3*sigma`` and
    is only valid while ``delta > 3*sigma``.  ``latency`` picks how the
    click latency enters the decision window (``shifted`` leaves click
    times displaced, ``compensated`` corrects them); by default the fixed
    rule ships unaware (``shifted``) and the adaptive rules — which must
    measure the latency to adapt — correct for it (``compensated``).

    ``seeds`` feeds the Monte Carlo engine; every sweep point and mode
    draws from its own independently spawned sub-stream, and ``runs`` sets
    the number of sampled sessions per point.  ``output`` records where
    the table should be written; it does not affect the numbers and is
    excluded from the fingerprint.
    """

    phrase: str
    sweep_param: str
    sweep: SweepRange
    mode: str = "slow"
    layout: str = "grid2x2"
    engine: str = "analytic"
    delay_rule: str = "fixed"
    latency: Union[str, None] = None
    delta: float = 0.0
    sigma: Union[float, None] = None
    sigma_fraction: Union[float, None] = None
    f: float = 0.0
    lam: float = 0.0
    t_scan: float = 1.0
    t_fast: Union[float, None] = None
    undo_window: int = 2
    error_limit: int = 2
    kappa: float = 10.0
    seeds: tuple = (0,)
    runs: int = 1000
    output: Union[str, None] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if not self.phrase:
            raise ConfigurationError("phrase must not be empty")
        if self.sweep_param not in SWEEP_PARAMS:
            raise ConfigurationError(
                f"unknown sweep parameter {self.sweep_param!r}; pick one of {SWEEP_PARAMS}"
            )
        if self.mode not in MODES:
            raise ConfigurationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.engine not in ENGINES:
            raise ConfigurationError(f"engine must be one of {ENGINES}, got {self.engine!r}")
        if self.delay_rule not in DELAY_RULES:
            raise ConfigurationError(
                f"delay_rule must be one of {DELAY_RULES}, got {self.delay_rule!r}"
            )
        if self.latency not in (None, "shifted", "compensated"):
            raise ConfigurationError(
                f"latency must be 'shifted' or 'compensated' when given, got {self.latency!r}"
            )
        if self.sigma is not None and self.sigma_fraction is not None:
            raise ConfigurationError("give sigma or sigma_fraction, not both")
        if self.sweep_param == "sigma_fraction" and self.sigma is not None:
            raise ConfigurationError(
                "sweeping sigma_fraction conflicts with a fixed absolute sigma; drop sigma"
            )
        if self.sweep_param == "t_fast" and self.mode == "slow":
            raise ConfigurationError("sweeping t_fast needs mode 'fast' or 'both'")
        if self.mode in ("fast", "both") and self.t_fast is None and self.sweep_param != "t_fast":
            raise ConfigurationError("fast mode needs t_fast (the reduced dwell, in seconds)")
        if not self.seeds:
            raise ConfigurationError("seeds must not be empty")
        if self.runs < 1:
            raise ConfigurationError(f"runs must be >= 1, got {self.runs}")

    # -- serialization ------------------------------------------------------

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentSpec":
        """Build a spec from its JSON form (``lambda`` maps to the rate field)."""
        if not isinstance(data, dict):
            raise ConfigurationError("an experiment configuration must be a JSON object")
        data = dict(data)
        if "lambda" in data:
            if "lam" in data:
                raise ConfigurationError("give 'lambda' or 'lam', not both")
            data["lam"] = data.pop("lambda")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(f"unknown configuration keys: {unknown}")
        sweep = data.get("sweep")
        if isinstance(sweep, dict):
            extra = sorted(set(sweep) - {"start", "stop", "step"})
            if extra:
                raise ConfigurationError(f"unknown sweep keys: {extra}")
            try:
                data["sweep"] = SweepRange(sweep["start"], sweep["stop"], sweep["step"])
            except KeyError as exc:
                raise ConfigurationError(f"sweep needs start/stop/step, missing {exc}") from None
        elif isinstance(sweep, (list, tuple)):
            if len(sweep) != 3:
                raise ConfigurationError("a sweep list must be [start, stop, step]")
            data["sweep"] = SweepRange(*sweep)
        missing = sorted(k for k in ("phrase", "sweep_param", "sweep") if k not in data)
        if missing:
            raise ConfigurationError(f"configuration is missing required keys: {missing}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigurationError(str(exc)) from exc

    @classmethod
    def from_json_file(cls, path: "str | Path") -> "ExperimentSpec":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigurationError(f"cannot read configuration file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"configuration file {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        """JSON form, inverse of :meth:`from_dict`; ``None`` fields are omitted."""
        out: dict = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if f.name == "lam":
                out["lambda"] = value
            elif f.name == "sweep":
                out["sweep"] = {"start": value.start, "stop": value.stop, "step": value.step}
            elif f.name == "seeds":
                out["seeds"] = list(value)
            else:
                out[f.name] = value
        return out

    def fingerprint(self) -> str:
        """SHA-256 over the canonical JSON form, minus the output path."""
        data = self.to_dict()
        data.pop("output", None)
        blob = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def with_overrides(self, **changes) -> "ExperimentSpec":
        """Copy with the given fields replaced (used by command-line flags)."""
        return replace(self, **changes)


def resolve_layout(ref: str) -> GridLayout:
    """Layout from a file path or a bundled layout name."""
    path = Path(ref)
    if path.suffix == ".json" or path.exists():
        if not path.exists():
            raise ConfigurationError(f"layout file {ref!r} does not exist")
        try:
            return load_layout(path)
        except (ValueError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"layout file {ref!r} is invalid: {exc}") from exc
    try:
        return builtin_layout(ref)
    except KeyError:
        raise ConfigurationError(
            f"unknown layout {ref!r}: not a readable file and not one of {builtin_layout_names()}"
        ) from None


# ---------------------------------------------------------------------------
# point resolution


@dataclass(frozen=True)
class ResolvedPoint:
    """One sweep point turned into runnable parameters.

    ``params.t_scan`` already reflects the delay rule; ``fast`` is present
    whenever the experiment touches the fast mode.  ``latency`` applies to
    the slow mode only — fast-mode decisions always correct for the
    latency they measure.
    """

    value: float
    latency: str
    params: NoiseParams
    fast: Union[FastParams, None]


def resolve_point(spec: ExperimentSpec, value: float) -> ResolvedPoint:
    """Apply one swept value and the delay rule to the spec's fixed settings."""
    param = spec.sweep_param
    delta = value if param == "delta" else spec.delta
    lam = value if param == "lambda" else spec.lam
    t_base = value if param == "t_scan" else spec.t_scan
    t_fast = value if param == "t_fast" else spec.t_fast
    fraction = value if param == "sigma_fraction" else spec.sigma_fraction

    if fraction is not None:
        sigma = fraction * t_base
    elif spec.sigma is not None:
        sigma = spec.sigma
    else:
        sigma = _DEFAULT_SIGMA

    if spec.delay_rule == "fixed":
        t_eff = t_base
    elif spec.delay_rule == "adaptive_plus":
        t_eff = max(0.5, delta + 3.0 * sigma)
    else:  # adaptive_minus
        if not delta > 3.0 * sigma:
            raise ConfigurationError(
                f"the shortened-dwell rule needs delta > 3*sigma, got delta={delta:g} "
                f"and 3*sigma={3.0 * sigma:g} (at {param}={value:g})"
            )
        t_eff = delta - 3.0 * sigma

    latency = spec.latency
    if latency is None:
        latency = "shifted" if spec.delay_rule == "fixed" else "compensated"

    try:
        params = NoiseParams(
            click_timing=ClickTiming(delta=delta, sigma=sigma),
            switch_noise=SwitchNoise(f=spec.f, lam=lam),
            t_scan=t_eff,
            undo_window=spec.undo_window,
            error_limit=spec.error_limit,
            kappa=spec.kappa,
        )
        fast = None
        if spec.mode in ("fast", "both"):
            if t_fast is None:
                raise ValueError("fast mode needs t_fast")
            fast = FastParams(base=params, t_fast=t_fast)
    except ValueError as exc:
        raise ConfigurationError(f"at {param}={value:g}: {exc}") from exc
    return ResolvedPoint(value=value, latency=latency, params=params, fast=fast)


def _check_engine_support(spec: ExperimentSpec, points: Sequence[ResolvedPoint]) -> None:
    if spec.engine in ("analytic", "both") and spec.mode in ("fast", "both"):
        bad = [p.value for p in points if p.params.switch_noise.lam > 0]
        if bad:
            raise ConfigurationError(
                "the exact fast-mode recursion does not cover false positives "
                f"(lambda > 0 at {spec.sweep_param}={bad[0]:g}); "
                "set lambda to 0 or use engine='montecarlo'"
            )


# ---------------------------------------------------------------------------
# sweep evaluation


ANALYTIC_COLUMNS = (
    "analytic_wpm",
    "analytic_cpc",
    "analytic_cer",
    "analytic_p_fail",
    "analytic_scans_mean",
    "analytic_scans_std",
    "analytic_seconds_mean",
    "analytic_seconds_std",
)

MC_COLUMNS = (
    "mc_wpm",
    "mc_wpm_std",
    "mc_cpc",
    "mc_cpc_std",
    "mc_cer",
    "mc_cer_std",
    "mc_p_fail",
    "mc_p_fail_std",
    "mc_scans_mean",
    "mc_seconds_mean",
)

COLUMNS = ("param", "value", "mode", "latency", "t_scan_eff", "sigma_eff") + (
    ANALYTIC_COLUMNS + MC_COLUMNS
)


def analytic_phrase_metrics(
    words: Sequence[str],
    layout: GridLayout,
    params: NoiseParams,
    fast: Union[FastParams, None] = None,
    mode: str = "slow",
    latency: str = "shifted",
) -> dict:
    """Exact phrase metrics: moment recursions per word, summed across words.

    Words are independent, so means and variances add; the phrase rate is
    the standard five-character words over the expected total duration.
    """
    unit = params.t_scan if mode == "slow" else fast.t_fast
    chars = sum(len(w) for w in words)
    scans_mean = scans_var = 0.0
    seconds = seconds_var = 0.0
    clicks = errors = fail_words = 0.0
    for word in words:
        if mode == "slow":
            chain = build_slow(word, layout, params, latency=latency)
        else:
            chain = build_fast(word, layout, fast)
        scans = count_moments(chain, "scans")
        time = count_moments(chain, "time")
        clicks_m = count_moments(chain, "clicks")
        err = errors_pmf(chain)
        split = outcome_probabilities(chain)
        scans_mean += scans.mean
        scans_var += scans.std**2
        seconds += time.mean * unit
        seconds_var += (time.std * unit) ** 2
        clicks += clicks_m.mean
        errors += err.mean()
        fail_words += split.error + split.failure
    return {
        "wpm": (chars / 5.0) / (seconds / 60.0),
        "cpc": clicks / chars,
        "cer": errors / chars,
        "p_fail": fail_words / len(words),
        "scans_mean": scans_mean,
        "scans_std": math.sqrt(scans_var),
        "seconds_mean": seconds,
        "seconds_std": math.sqrt(seconds_var),
    }


def _analytic_phrase(words, layout, point: ResolvedPoint, mode: str) -> dict:
    metrics = analytic_phrase_metrics(
        words, layout, point.params, point.fast, mode, point.latency
    )
    return {f"analytic_{key}": value for key, value in metrics.items()}


def _mc_phrase(words, layout, point: ResolvedPoint, mode: str, runs: int, seed) -> dict:
    """Sampled phrase metrics from one vectorised batch per word."""
    params = point.params if mode == "slow" else point.fast
    res = phrase_batch(words, layout, params, mode=mode, n=runs, seed=seed, latency=point.latency)
    return {
        "mc_wpm": res.wpm.mean,
        "mc_wpm_std": res.wpm.std,
        "mc_cpc": res.cpc.mean,
        "mc_cpc_std": res.cpc.std,
        "mc_cer": res.cer.mean,
        "mc_cer_std": res.cer.std,
        "mc_p_fail": res.p_fail.mean,
        "mc_p_fail_std": res.p_fail.std,
        "mc_scans_mean": float(np.mean(res.scans)),
        "mc_seconds_mean": float(np.mean(res.seconds)),
    }


@dataclass(frozen=True)
class SweepTable:
    """Ordered sweep results plus the provenance needed to reproduce them."""

    param: str
    columns: tuple
    rows: tuple
    fingerprint: str
    meta: dict

    def to_csv(self) -> str:
        """Comma-separated table with commented provenance header lines."""
        m = self.meta
        lines = [
            f"# sweep fingerprint=sha256:{self.fingerprint}",
            f"# phrase={m['phrase'].replace('_', ' ')}",
            f"# layout={m['layout']} mode={m['mode']} engine={m['engine']} "
            f"delay_rule={m['delay_rule']} runs={m['runs']} seeds={list(m['seeds'])}",
            f"# direction=increasing {self.param}",
            ",".join(self.columns),
        ]
        for row in self.rows:
            lines.append(",".join(_format_cell(row.get(col)) for col in self.columns))
        return "\n".join(lines) + "\n"

    def write(self, path: "str | Path") -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_csv(), encoding="utf-8")
        return path


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def run_sweep(spec: ExperimentSpec, max_workers: Union[int, None] = None) -> SweepTable:
    """Evaluate every sweep point and return the ordered result table.

    Points are evaluated concurrently but the table is always assembled in
    sweep order, one row per (point, mode).  For a fixed configuration the
    analytic columns are bitwise reproducible and the sampled columns are
    deterministic in the configured seeds.
    """
    layout = resolve_layout(spec.layout)
    try:
        words = split_phrase(spec.phrase, layout)
    except ValueError as exc:
        raise ConfigurationError(f"phrase does not fit the layout: {exc}") from exc
    values = spec.sweep.values()
    points = [resolve_point(spec, v) for v in values]
    _check_engine_support(spec, points)
    modes = ("slow", "fast") if spec.mode == "both" else (spec.mode,)

    root = np.random.SeedSequence(list(spec.seeds))
    children = root.spawn(len(points) * len(modes))
    tasks = []
    for i, point in enumerate(points):
        for j, mode in enumerate(modes):
            tasks.append((point, mode, children[i * len(modes) + j]))

    def evaluate(task) -> dict:
        point, mode, child = task
        row = {
            "param": spec.sweep_param,
            "value": point.value,
            "mode": mode,
            "latency": point.latency if mode == "slow" else "compensated",
            "t_scan_eff": point.params.t_scan,
            "sigma_eff": point.params.click_timing.sigma,
        }
        if spec.engine in ("analytic", "both"):
            row.update(_analytic_phrase(words, layout, point, mode))
        if spec.engine in ("montecarlo", "both"):
            row.update(_mc_phrase(words, layout, point, mode, spec.runs, child))
        return row

    if max_workers is None:
        max_workers = min(8, len(tasks)) or 1
    if max_workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = tuple(pool.map(evaluate, tasks))
    else:
        rows = tuple(evaluate(t) for t in tasks)

    return SweepTable(
        param=spec.sweep_param,
        columns=COLUMNS,
        rows=rows,
        fingerprint=spec.fingerprint(),
        meta={
            "phrase": spec.phrase,
            "layout": spec.layout,
            "mode": spec.mode,
            "engine": spec.engine,
            "delay_rule": spec.delay_rule,
            "runs": spec.runs,
            "seeds": spec.seeds,
        },
    )


# ---------------------------------------------------------------------------
# button-capacity table


@dataclass(frozen=True)
class CapacityRow:
    """Optimal stop probability and information rate, with the noise penalty."""

    d: float
    g: float
    f: float
    beta_star: float
    rate: float
    penalty: float
    adjusted_rate: float


def capacity_table(d: float, g: float, f: float = 0.0) -> CapacityRow:
    """Optimise the self-paced button model and apply the switch-noise penalty."""
    try:
        beta_star, rate = optimize_beta(d, g)
        penalty = noisy_factor(f)
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from exc
    return CapacityRow(
        d=float(d),
        g=float(g),
        f=float(f),
        beta_star=beta_star,
        rate=rate,
        penalty=penalty,
        adjusted_rate=rate * penalty,
    )


# ---------------------------------------------------------------------------
# engine agreement


@dataclass(frozen=True)
class PointComparison:
    """Score of one sampled histogram against its exact distribution."""

    value: float
    mode: str
    word: str
    kind: str
    report: CompareReport

    def line(self) -> str:
        r = self.report
        verdict = "PASS" if r.passed else "FAIL"
        max_z = "inf" if math.isinf(r.max_abs_z) else format(r.max_abs_z, ".2f")
        return (
            f"{verdict} value={self.value:g} mode={self.mode} word={self.word} "
            f"kind={self.kind} points={r.n_points} within={100.0 * r.fraction_within:.1f}% "
            f"max|z|={max_z}"
        )


@dataclass(frozen=True)
class ValidationReport:
    """All per-distribution comparisons of one experiment, plus the verdict."""

    comparisons: tuple
    passed: bool
    n_samples: int

    def to_text(self) -> str:
        lines = [c.line() for c in self.comparisons]
        verdict = "PASS" if self.passed else "FAIL"
        n_failed = sum(1 for c in self.comparisons if not c.report.passed)
        lines.append(
            f"{verdict}: {len(self.comparisons) - n_failed}/{len(self.comparisons)} "
            f"comparisons agree at {self.n_samples} runs each"
        )
        return "\n".join(lines) + "\n"


def _analytic_pmf(chain, kind: str):
    if kind == "errors":
        return errors_pmf(chain)
    return counts_pmf(chain, kind)


def validate_run(spec: ExperimentSpec) -> ValidationReport:
    """Score the sampler against the exact distributions across the sweep.

    Every (sweep point, mode, word) triple contributes one sampled batch of
    ``spec.runs`` sessions, scored against the exact scan, click, and error
    distributions of the same chain.  The report passes only if every
    comparison does.  Requires ``engine='both'``.
    """
    if spec.engine != "both":
        raise ConfigurationError(
            "agreement validation runs both engines; set engine='both' in the configuration"
        )
    layout = resolve_layout(spec.layout)
    try:
        words = split_phrase(spec.phrase, layout)
    except ValueError as exc:
        raise ConfigurationError(f"phrase does not fit the layout: {exc}") from exc
    points = [resolve_point(spec, v) for v in spec.sweep.values()]
    _check_engine_support(spec, points)
    modes = ("slow", "fast") if spec.mode == "both" else (spec.mode,)
    distinct_words = sorted(set(words))

    root = np.random.SeedSequence(list(spec.seeds))
    children = iter(root.spawn(len(points) * len(modes) * len(distinct_words)))
    comparisons = []
    for point in points:
        for mode in modes:
            for word in distinct_words:
                child = next(children)
                if mode == "slow":
                    chain = build_slow(word, layout, point.params, latency=point.latency)
                    batch_params = point.params
                else:
                    chain = build_fast(word, layout, point.fast)
                    batch_params = point.fast
                batch = run_batch(
                    word,
                    layout,
                    batch_params,
                    mode=mode,
                    n=spec.runs,
                    seed=child,
                    latency=point.latency,
                )
                for kind in VALIDATION_KINDS:
                    report = compare(batch.histogram(kind), _analytic_pmf(chain, kind))
                    comparisons.append(
                        PointComparison(
                            value=point.value, mode=mode, word=word, kind=kind, report=report
                        )
                    )
    passed = all(c.report.passed for c in comparisons)
    return ValidationReport(comparisons=tuple(comparisons), passed=passed, n_samples=spec.runs)
