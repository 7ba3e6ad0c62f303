"""Modelling toolkit for single-switch scanning text entry under noise.

A scanning interface highlights grid cells one after another and a single
switch click selects first a row, then a cell within it.  This package
models that loop end to end:

- :mod:`scansim.layout` — scanning grids, dwell schedules, minimum costs;
- :mod:`scansim.noise` — click latency/spread, missed clicks, spurious
  clicks, and the per-dwell click/miss probabilities they induce;
- :mod:`scansim.chain` — the absorbing Markov chain over user-interface
  states for both the standard and the deferred-decision (fast) mode;
- :mod:`scansim.pmf` — exact distributions and moments of scans, duration,
  clicks, and errors over the chain;
- :mod:`scansim.montecarlo` — event-level and vectorised simulators with
  reproducible seeded logs, plus the analytic-vs-empirical comparator;
- :mod:`scansim.capacity` — the information rate of a noisy single button
  and its optimal duty cycle;
- :mod:`scansim.experiments` — parameter sweeps, capacity tables, and
  validation runs behind the command line interface;
- :mod:`scansim.service` — the HTTP interface driving live sessions.

The command line entry point is ``scansim`` (subcommands ``sweep``,
``capacity``, ``validate``, and ``serve``).
"""

from scansim.capacity import ButtonModel, info_rate, noisy_factor, optimize_beta
from scansim.chain import (
    OUTCOME_CORRECT,
    OUTCOME_ERROR,
    OUTCOME_FAILURE,
    ScanChain,
    StateId,
    UnsupportedConfiguration,
    build_fast,
    build_slow,
    sequence_probability,
)
from scansim.experiments import (
    ConfigurationError,
    ExperimentSpec,
    analytic_phrase_metrics,
    capacity_table,
    run_sweep,
    validate_run,
)
from scansim.layout import (
    FastParams,
    GridLayout,
    builtin_layout,
    builtin_layout_names,
    load_layout,
    min_scans,
    split_phrase,
)
from scansim.montecarlo import (
    SessionLog,
    compare,
    phrase_batch,
    run_batch,
    run_phrase,
    run_word,
)
from scansim.noise import ClickTiming, NoiseParams, SwitchNoise, make_rng
from scansim.pmf import (
    Pmf,
    clicks_pmf,
    count_moments,
    counts_pmf,
    errors_pmf,
    min_support,
    outcome_probabilities,
    scans_pmf,
    summarize,
    time_pmf,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # layouts
    "GridLayout",
    "FastParams",
    "builtin_layout",
    "builtin_layout_names",
    "load_layout",
    "min_scans",
    "split_phrase",
    # noise
    "ClickTiming",
    "SwitchNoise",
    "NoiseParams",
    "make_rng",
    # chain
    "OUTCOME_ERROR",
    "OUTCOME_CORRECT",
    "OUTCOME_FAILURE",
    "StateId",
    "ScanChain",
    "UnsupportedConfiguration",
    "build_slow",
    "build_fast",
    "sequence_probability",
    # exact distributions
    "Pmf",
    "counts_pmf",
    "scans_pmf",
    "time_pmf",
    "clicks_pmf",
    "errors_pmf",
    "count_moments",
    "min_support",
    "outcome_probabilities",
    "summarize",
    # simulation
    "SessionLog",
    "run_word",
    "run_batch",
    "run_phrase",
    "phrase_batch",
    "compare",
    # capacity
    "ButtonModel",
    "info_rate",
    "optimize_beta",
    "noisy_factor",
    # experiments
    "ConfigurationError",
    "ExperimentSpec",
    "analytic_phrase_metrics",
    "run_sweep",
    "capacity_table",
    "validate_run",
]
