"""Click-timing and switch-noise model for single-switch scanning input.

A scanning interface highlights cells one after another and the user
triggers a switch when the intended cell is lit.  Three independent noise
sources distort that interaction:

* click timing -- the observed click time is spread around the centre of
  the intended cell's highlight window, shifted by a latency ``delta``
  (Gaussian by default, any continuous density optionally);
* false negatives -- a true switch event is ignored with probability ``f``;
* false positives -- spurious events arrive as a homogeneous Poisson
  process with rate ``lam`` events per second.

This module computes, for the cell windows of one group scan, the
probability that a given window does or does not receive a click, and can
sample concrete event timestamps for discrete-event simulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.special import ndtr

__all__ = [
    "WAIT",
    "ClickTiming",
    "SwitchNoise",
    "NoiseParams",
    "CellWindow",
    "scan_windows",
    "cell_mean",
    "overlap_prob",
    "miss_prob",
    "click_prob",
    "sample_events",
    "sample_click_offsets",
    "make_rng",
    "RNG_ALGORITHM",
]

#: Identifier of the counter-based pseudorandom generator used whenever this
#: package turns an integer seed into a random stream.  Recorded in session
#: logs so that other implementations can replay the same sequences.
RNG_ALGORITHM = "philox4x64-10"


class _Wait:
    """Singleton aim value for a group scan in which the user intends no click."""

    __slots__ = ()
    _instance: "_Wait | None" = None

    def __new__(cls) -> "_Wait":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "WAIT"

    def __reduce__(self):
        return (_Wait, ())


#: The "no intended cell" aim: the user sits out the whole group scan.
WAIT = _Wait()


def make_rng(seed_or_rng: "int | np.random.SeedSequence | np.random.Generator") -> np.random.Generator:
    """Return a random generator: integers and seed sequences start a counter-based Philox stream."""
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    if isinstance(seed_or_rng, np.random.SeedSequence):
        return np.random.Generator(np.random.Philox(seed_or_rng))
    return np.random.Generator(np.random.Philox(int(seed_or_rng)))


@dataclass(frozen=True)
class ClickTiming:
    """Distribution of the observed click time around the intended cell centre.

    The observed click time when aiming at a cell is ``centre + delta + X``,
    where ``X`` is zero-mean with standard deviation ``sigma`` (Gaussian by
    default).  ``density`` may replace the Gaussian with any continuous
    zero-centred density function; it must then declare a finite ``support``
    ``(lo, hi)`` and integrate to one over it.  ``sigma`` is ignored when a
    custom density is supplied.
    """

    delta: float = 0.0
    sigma: float = 0.05
    density: Callable[[float], float] | None = None
    support: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.delta < 0:
            raise ValueError(f"delta must be >= 0 seconds, got {self.delta}")
        if self.density is None:
            if self.sigma <= 0:
                raise ValueError(f"sigma must be > 0 seconds, got {self.sigma}")
        else:
            if self.support is None:
                raise ValueError("a custom click-time density must declare a finite support")
            lo, hi = self.support
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError(f"support must be a finite non-empty interval, got {self.support}")
            total, _ = quad(lambda x: _eval_density(self.density, x), lo, hi, epsabs=1e-10, limit=200)
            if abs(total - 1.0) > 1e-6:
                raise ValueError(f"density integrates to {total:.9f} over its support, expected 1 within 1e-6")


@dataclass(frozen=True)
class SwitchNoise:
    """Switch reliability: false-negative probability ``f`` and false-positive rate ``lam``."""

    f: float = 0.0
    lam: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.f <= 1.0:
            raise ValueError(f"false-negative probability f must be in [0, 1], got {self.f}")
        if self.lam < 0.0:
            raise ValueError(f"false-positive rate lam must be >= 0 per second, got {self.lam}")


@dataclass(frozen=True)
class NoiseParams:
    """Complete simulation parameter set for one scanning configuration.

    ``t_scan`` is the per-cell dwell of the standard scanning mode, in
    seconds.  ``undo_window`` is the number of column group scans the user
    waits out to cancel a wrong row selection.  ``error_limit`` is the
    number of spurious letter selections tolerated before the system is
    considered failed.  ``kappa`` scales the time-out horizon for one word.
    """

    click_timing: ClickTiming = ClickTiming()
    switch_noise: SwitchNoise = SwitchNoise()
    t_scan: float = 1.0
    undo_window: int = 2
    error_limit: int = 2
    kappa: float = 10.0

    def __post_init__(self) -> None:
        if self.t_scan <= 0:
            raise ValueError(f"t_scan must be > 0 seconds, got {self.t_scan}")
        if self.undo_window < 1:
            raise ValueError(f"undo_window must be >= 1, got {self.undo_window}")
        if self.error_limit < 1:
            raise ValueError(f"error_limit must be >= 1, got {self.error_limit}")
        if self.kappa < 1:
            raise ValueError(f"kappa must be >= 1, got {self.kappa}")


@dataclass(frozen=True)
class CellWindow:
    """Half-open highlight interval ``[start, start + duration)`` of one cell."""

    start: float
    duration: float

    def __post_init__(self) -> None:
        if self.start < 0:
            raise ValueError(f"window start must be >= 0, got {self.start}")
        if self.duration <= 0:
            raise ValueError(f"window duration must be > 0, got {self.duration}")

    @property
    def end(self) -> float:
        return self.start + self.duration


def scan_windows(num_cells: int, step: float, final_hold: float | None = None) -> list[CellWindow]:
    """Highlight windows of one group scan, laid out after the leading tick.

    Cell ``v`` (1-based) is lit during ``[v * step, v * step + duration)``;
    every duration is ``step`` except the last cell, which holds for
    ``final_hold`` when given.  The interval ``[0, step)`` preceding the
    first window is the tick that paces the group.
    """
    if num_cells < 1:
        raise ValueError(f"a group scan needs at least one cell, got {num_cells}")
    if step <= 0:
        raise ValueError(f"step must be > 0 seconds, got {step}")
    windows = []
    for v in range(1, num_cells + 1):
        duration = step
        if v == num_cells and final_hold is not None:
            if final_hold <= 0:
                raise ValueError(f"final_hold must be > 0 seconds, got {final_hold}")
            duration = final_hold
        windows.append(CellWindow(start=v * step, duration=duration))
    return windows


def _check_cell_index(v: int, windows: Sequence[CellWindow]) -> None:
    if not isinstance(v, (int, np.integer)) or not 1 <= v <= len(windows):
        raise IndexError(f"cell index {v!r} outside 1..{len(windows)}")


def cell_mean(v: int, windows: Sequence[CellWindow], delta: float = 0.0) -> float:
    """Mean of the observed click time when aiming at cell ``v``.

    The user targets the centre of the cell's highlight window and the
    click arrives ``delta`` seconds later on average.
    """
    _check_cell_index(v, windows)
    w = windows[v - 1]
    return w.start + 0.5 * w.duration + delta


def _eval_density(density: Callable[[float], float], t: float) -> float:
    """Evaluate a user-supplied density defensively, reporting the offending time."""
    try:
        y = float(density(t))
    except Exception as exc:  # pragma: no cover - exercised via error path test
        raise ArithmeticError(f"click-time density evaluation failed at t={t!r}") from exc
    if not math.isfinite(y) or y < 0:
        raise ArithmeticError(f"click-time density returned {y!r} at t={t!r}")
    return y


def overlap_prob(
    v_scan: int,
    v_aim: int,
    timing: ClickTiming,
    windows: Sequence[CellWindow],
    method: str = "auto",
) -> float:
    """Probability that a click aimed at ``v_aim`` lands inside ``v_scan``'s window.

    The click-time density is centred at ``cell_mean(v_aim, windows,
    timing.delta)`` and integrated over the highlight window of ``v_scan``.
    ``method`` selects ``"closed_form"`` (Gaussian only, via the normal CDF)
    or ``"quadrature"`` (adaptive numerical integration, absolute tolerance
    1e-10); ``"auto"`` picks the closed form whenever the density is
    Gaussian.
    """
    _check_cell_index(v_scan, windows)
    _check_cell_index(v_aim, windows)
    w = windows[v_scan - 1]
    mean = cell_mean(v_aim, windows, timing.delta)

    if method == "auto":
        method = "closed_form" if timing.density is None else "quadrature"
    if method == "closed_form":
        if timing.density is not None:
            raise ValueError("closed form is only available for the Gaussian click-time model")
        s = timing.sigma
        return float(ndtr((w.end - mean) / s) - ndtr((w.start - mean) / s))
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}; expected 'auto', 'closed_form' or 'quadrature'")

    if timing.density is None:
        s = timing.sigma
        norm = 1.0 / (s * math.sqrt(2.0 * math.pi))
        density = lambda t: norm * math.exp(-0.5 * ((t - mean) / s) ** 2)  # noqa: E731
        support_lo, support_hi = mean - 8.0 * s, mean + 8.0 * s
    else:
        base = timing.density
        density = lambda t: _eval_density(base, t - mean)  # noqa: E731
        support_lo, support_hi = mean + timing.support[0], mean + timing.support[1]

    lo = max(w.start, support_lo)
    hi = min(w.end, support_hi)
    if hi <= lo:
        return 0.0
    value, _ = quad(density, lo, hi, epsabs=1e-10, limit=200)
    return float(min(max(value, 0.0), 1.0))


def miss_prob(
    v_scan: int,
    v_aim: "int | _Wait",
    params: NoiseParams,
    windows: Sequence[CellWindow],
) -> float:
    """Probability that cell ``v_scan``'s window receives no click at all.

    No false positive may fire during the window, and -- when the user aims
    at some cell rather than sitting the group out -- the true click must
    either be dropped (probability ``f``) or land outside this window.
    """
    _check_cell_index(v_scan, windows)
    duration = windows[v_scan - 1].duration
    noise = params.switch_noise
    base = math.exp(-noise.lam * duration)
    if v_aim is WAIT:
        return base
    q = overlap_prob(v_scan, v_aim, params.click_timing, windows)
    return base * (1.0 - (1.0 - noise.f) * q)


def click_prob(
    v_scan: int,
    v_aim: "int | _Wait",
    params: NoiseParams,
    windows: Sequence[CellWindow],
) -> float:
    """Probability that cell ``v_scan``'s window receives at least one click."""
    return 1.0 - miss_prob(v_scan, v_aim, params, windows)


_DENSITY_GRID_POINTS = 4097
_density_samplers: dict[tuple[int, tuple[float, float]], tuple[np.ndarray, np.ndarray]] = {}


def _density_grid(timing: ClickTiming) -> tuple[np.ndarray, np.ndarray]:
    """Tabulated inverse-CDF grid of a custom zero-centred density, cached."""
    key = (id(timing.density), timing.support)
    cached = _density_samplers.get(key)
    if cached is None:
        lo, hi = timing.support
        xs = np.linspace(lo, hi, _DENSITY_GRID_POINTS)
        ys = np.array([_eval_density(timing.density, float(x)) for x in xs])
        cdf = np.concatenate([[0.0], np.cumsum((ys[1:] + ys[:-1]) * 0.5 * np.diff(xs))])
        cdf /= cdf[-1]
        _density_samplers[key] = (xs, cdf)
        cached = (xs, cdf)
    return cached


def _sample_custom_offset(timing: ClickTiming, rng: np.random.Generator) -> float:
    """Draw one offset from a custom zero-centred density by inverse-CDF lookup."""
    xs, cdf = _density_grid(timing)
    return float(np.interp(rng.random(), cdf, xs))


def sample_click_offsets(timing: ClickTiming, rng: np.random.Generator, size: int) -> np.ndarray:
    """Draw ``size`` zero-mean click-time offsets (Gaussian or custom density)."""
    if timing.density is None:
        return rng.normal(0.0, timing.sigma, size)
    xs, cdf = _density_grid(timing)
    return np.interp(rng.random(size), cdf, xs)


def sample_events(
    v_aim: "int | _Wait",
    params: NoiseParams,
    windows: Sequence[CellWindow],
    rng: "int | np.random.Generator",
) -> list[float]:
    """Sample the click timestamps observed during one group scan, sorted ascending.

    At most one true click is generated: when the user aims at a cell, its
    time is drawn from the click-time density shifted by the latency, and it
    is retained with probability ``1 - f``.  Independently, false positives
    arrive as a Poisson process over the whole group span (tick included)
    and are uniformly distributed in time.  The draw order is fixed (true
    click time, retention, false-positive count, false-positive times) so
    that a given seed always reproduces the same events.
    """
    gen = make_rng(rng)
    timing = params.click_timing
    noise = params.switch_noise
    events: list[float] = []

    if v_aim is not WAIT:
        mean = cell_mean(v_aim, windows, timing.delta)
        if timing.density is None:
            t_true = gen.normal(mean, timing.sigma)
        else:
            t_true = mean + _sample_custom_offset(timing, gen)
        if gen.random() >= noise.f:
            events.append(float(t_true))

    span = windows[-1].end
    n_false = int(gen.poisson(noise.lam * span))
    if n_false:
        events.extend(float(t) for t in gen.uniform(0.0, span, n_false))

    return sorted(events)
