"""Stochastic session simulator for scanning text entry.

This module answers the same questions as :mod:`scansim.chain` and
:mod:`scansim.pmf` — how many scan steps, clicks, and errors a word costs
under switch noise — but by sampling raw sessions instead of propagating
probabilities.  It shares only the parameter containers and the pure
behaviour rules (:func:`scansim.chain.intended_cell`,
:func:`scansim.chain.click_outcome`, :func:`scansim.chain.miss_successor`)
with the analytic model; every probability is realised here by drawing
click times, switch drops, and false-positive arrivals directly, so
agreement between the two engines is a genuine cross-check rather than a
tautology.

Two samplers are provided.  :func:`run_word` walks one session at a time
and keeps a full event log (:class:`SessionLog`), which makes it the
readable reference implementation and the producer of replayable session
records.  :func:`run_batch` advances many sessions in lock-step with
vectorised draws and returns per-session totals only; it is the engine
behind large validation runs.  :func:`compare` scores an empirical
histogram against an analytic distribution point by point.

Sampling conventions shared by both samplers:

* Each dwell draws its own click-time offset and switch-drop decision,
  independently of every other dwell.  The intended click registers only
  if it lands inside the dwell's own highlight window; a click that falls
  outside is not carried over to a later dwell.  This is exactly the
  independence the analytic chain assumes, and it is what makes the two
  engines converge on the same distributions.
* Click times are compared against highlight windows in the decision
  frame: in the standard mode with ``latency="shifted"`` the raw click
  time is used (the latency pushes clicks toward later cells), while
  ``latency="compensated"`` and the fast mode subtract the known mean
  latency before deciding, centring the distribution.
* The leading tick of a group adds waiting time but carries no
  false-positive exposure in the standard mode, matching the analytic
  chain.  The fast mode races false positives over the whole pass.
* A word is abandoned as a failure once its scan-step budget
  (:func:`scansim.chain.scan_horizon`) is exhausted; the remaining
  letters plus pending spurious ones are charged as errors.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Sequence, Union

import numpy as np
from scipy import stats

from .chain import (
    COLUMN_PHASE,
    OUTCOME_CORRECT,
    OUTCOME_ERROR,
    OUTCOME_FAILURE,
    ROW_PHASE,
    StateId,
    click_outcome,
    intended_cell,
    miss_successor,
    scan_horizon,
)
from .layout import FastParams, GridLayout, final_hold_units, locate
from .noise import (
    RNG_ALGORITHM,
    WAIT,
    NoiseParams,
    cell_mean,
    make_rng,
    sample_click_offsets,
    scan_windows,
)
from .pmf import OutcomeSplit, Pmf

__all__ = [
    "EVENT_SCAN",
    "EVENT_TRUE_CLICK",
    "EVENT_FALSE_POSITIVE",
    "EVENT_REJECTED_CLICK",
    "EVENT_SELECTION",
    "EVENT_DELETE",
    "EVENT_UNDO",
    "EVENT_TERMINAL",
    "SessionLog",
    "BatchResult",
    "MetricCI",
    "PhraseResult",
    "CompareReport",
    "run_word",
    "run_batch",
    "run_phrase",
    "phrase_batch",
    "compare",
]

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]

EVENT_SCAN = "scan"
EVENT_TRUE_CLICK = "true-click"
EVENT_FALSE_POSITIVE = "false-positive"
EVENT_REJECTED_CLICK = "rejected-click"
EVENT_SELECTION = "selection"
EVENT_DELETE = "delete"
EVENT_UNDO = "undo"
EVENT_TERMINAL = "terminal"

_OUTCOME_CODE = {OUTCOME_ERROR: 0, OUTCOME_CORRECT: 1, OUTCOME_FAILURE: 2}
_CODE_OUTCOME = {code: name for name, code in _OUTCOME_CODE.items()}

_JSON_KW = {"sort_keys": True, "separators": (",", ":")}


# ---------------------------------------------------------------------------
# session records


@dataclass
class SessionLog:
    """Complete record of one simulated word-entry session.

    ``events`` is a time-ordered list of dictionaries, each carrying a
    timestamp ``t`` in seconds, a ``kind`` (one of the ``EVENT_*``
    constants), and kind-specific payload fields:

    * ``scan`` — ``phase``, ``cell``, and the scan ``weight`` (2 when the
      group's leading tick precedes the cell, 1 otherwise);
    * ``true-click`` / ``false-positive`` — a registered switch event,
      with the lit ``cell`` in the standard mode;
    * ``rejected-click`` — an intended click swallowed by the switch;
    * ``selection`` — the choice a registered click produced (``phase``,
      ``cell``, ``symbol`` during a column scan, and the ``source`` event
      kind);
    * ``delete`` — a selection of the delete key that removed something;
    * ``undo`` — a row selection cancelled by waiting the undo window out;
    * ``terminal`` — the session's end, with ``outcome``, the ``errors``
      charge, and whether a ``selection`` or a ``timeout`` caused it.

    ``totals`` holds the scan count (the sum of scan-event weights), the
    click count (the number of selections), and the error charge.
    ``time_units`` measures the session's duration in units of the
    per-cell delay — equal to the scan count in the standard mode, larger
    in the fast mode where the final cell of each pass is held —
    and ``seconds`` is ``time_units`` times ``unit_delay``.  In the fast
    mode the wall-clock timestamps in ``events`` use the true hold length,
    so they can lag ``seconds`` slightly when the hold is not an exact
    multiple of the fast step.

    Standard-mode sessions end a dwell at the first registered event;
    later events in the same window never happen.  Fast-mode passes defer
    the decision to the end of the pass, so every switch event of the
    pass is logged and the first registered one decides the selection;
    its timestamp is clipped into the pass's wall-clock interval.
    """

    word: str
    mode: str
    latency: str
    seed: Union[int, None]
    rng_algorithm: str
    unit_delay: float
    horizon: int
    hops: int
    outcome: str
    events: list
    totals: dict
    time_units: int
    seconds: float

    def validate(self) -> "SessionLog":
        """Check internal consistency; raise :class:`ValueError` on any breach."""
        if not self.events:
            raise ValueError("a session log needs at least one event")
        times = [ev["t"] for ev in self.events]
        if times[0] < 0:
            raise ValueError(f"event times must be >= 0, got {times[0]!r} first")
        for a, b in zip(times, times[1:]):
            if b < a:
                raise ValueError(f"event times must be non-decreasing, got {a!r} then {b!r}")
        terminals = [ev for ev in self.events if ev["kind"] == EVENT_TERMINAL]
        if len(terminals) != 1 or self.events[-1]["kind"] != EVENT_TERMINAL:
            raise ValueError("a session log ends with exactly one terminal event")
        terminal = terminals[0]
        if terminal["outcome"] != self.outcome:
            raise ValueError(f"outcome {self.outcome!r} does not match the terminal event {terminal['outcome']!r}")
        if self.outcome not in _OUTCOME_CODE:
            raise ValueError(f"unknown outcome {self.outcome!r}")
        scan_total = sum(ev["weight"] for ev in self.events if ev["kind"] == EVENT_SCAN)
        if self.totals.get("scans") != scan_total:
            raise ValueError(f"totals list {self.totals.get('scans')} scans but the events sum to {scan_total}")
        selections = sum(1 for ev in self.events if ev["kind"] == EVENT_SELECTION)
        if self.totals.get("clicks") != selections:
            raise ValueError(f"totals list {self.totals.get('clicks')} clicks but there are {selections} selections")
        if self.totals.get("errors") != terminal["errors"]:
            raise ValueError(
                f"totals list {self.totals.get('errors')} errors but the terminal event charges {terminal['errors']}"
            )
        if not 0 <= self.hops <= self.horizon:
            raise ValueError(f"hops {self.hops} outside 0..{self.horizon}")
        if self.time_units < self.totals.get("scans", 0):
            raise ValueError("time units can never undercut the scan count")
        expected = self.time_units * self.unit_delay
        if not math.isclose(self.seconds, expected, rel_tol=1e-12, abs_tol=0.0):
            raise ValueError(f"seconds {self.seconds!r} != time_units * unit_delay = {expected!r}")
        return self

    def to_jsonl(self) -> str:
        """Serialise as line-delimited JSON: one meta line, one line per event, one summary line.

        Keys are sorted and separators fixed, so equal logs serialise to
        byte-identical text.
        """
        meta = {
            "record": "meta",
            "word": self.word,
            "mode": self.mode,
            "latency": self.latency,
            "seed": self.seed,
            "rng_algorithm": self.rng_algorithm,
            "unit_delay": self.unit_delay,
            "horizon": self.horizon,
        }
        lines = [json.dumps(meta, **_JSON_KW)]
        for ev in self.events:
            lines.append(json.dumps({"record": "event", **ev}, **_JSON_KW))
        summary = {
            "record": "summary",
            "outcome": self.outcome,
            "totals": self.totals,
            "time_units": self.time_units,
            "seconds": self.seconds,
            "hops": self.hops,
        }
        lines.append(json.dumps(summary, **_JSON_KW))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "SessionLog":
        """Rebuild a session log from its :meth:`to_jsonl` serialisation."""
        records = []
        for i, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValueError(f"line {i} is not valid JSON: {exc}") from None
        if len(records) < 2:
            raise ValueError("a serialised session log needs a meta line and a summary line")
        meta, *events, summary = records
        if meta.get("record") != "meta" or summary.get("record") != "summary":
            raise ValueError("a serialised session log starts with a meta record and ends with a summary record")
        for ev in events:
            if ev.get("record") != "event":
                raise ValueError(f"unexpected record between meta and summary: {ev.get('record')!r}")
            ev.pop("record")
        return cls(
            word=meta["word"],
            mode=meta["mode"],
            latency=meta["latency"],
            seed=meta["seed"],
            rng_algorithm=meta["rng_algorithm"],
            unit_delay=meta["unit_delay"],
            horizon=meta["horizon"],
            hops=summary["hops"],
            outcome=summary["outcome"],
            events=events,
            totals=summary["totals"],
            time_units=summary["time_units"],
            seconds=summary["seconds"],
        )


# ---------------------------------------------------------------------------
# parameter plumbing


def _split_params(params, mode: str) -> tuple[NoiseParams, Union[FastParams, None]]:
    if mode == "slow":
        if isinstance(params, FastParams):
            raise TypeError("the standard mode takes NoiseParams; FastParams configures the fast mode")
        if not isinstance(params, NoiseParams):
            raise TypeError(f"params must be NoiseParams, got {type(params).__name__}")
        return params, None
    if mode == "fast":
        if not isinstance(params, FastParams):
            raise TypeError("the fast mode takes FastParams (a NoiseParams base plus the fast step)")
        return params.base, params
    raise ValueError(f"mode must be 'slow' or 'fast', got {mode!r}")


def _check_latency(latency: str) -> None:
    if latency not in ("shifted", "compensated"):
        raise ValueError(f"latency must be 'shifted' or 'compensated', got {latency!r}")


def _phase_name(r: int) -> str:
    return "row" if r == ROW_PHASE else "column"


# ---------------------------------------------------------------------------
# scalar reference sampler


def _simulate_slow_word(word, layout, params, latency, rng):
    """One standard-mode session; returns (events, outcome, scans, time_units, clicks, errors, hops)."""
    timing = params.click_timing
    f = params.switch_noise.f
    lam = params.switch_noise.lam
    step = params.t_scan
    # decision-frame shift: raw click times under "shifted", latency-corrected otherwise
    delta_sub = timing.delta if latency == "compensated" else 0.0
    horizon = scan_horizon(word, layout, params)
    chars = len(word)
    row_windows = scan_windows(layout.n_rows, step)
    col_windows = {s: scan_windows(layout.row_len(s), step) for s in range(1, layout.n_rows + 1)}

    state = StateId(ROW_PHASE, 1, 0, 0, None)
    events = [{"t": 0.0, "kind": EVENT_SCAN, "phase": "row", "cell": 1, "weight": 2}]
    scans = 2
    time_units = 2
    clicks = 0
    errors = 0
    hops = 0
    pass_start = 0.0

    while True:
        windows = row_windows if state.r == ROW_PHASE else col_windows[state.row]
        window = windows[state.v_prime - 1]
        aim = intended_cell(state, word, layout)

        candidates = []
        if aim is not WAIT:
            offset = float(sample_click_offsets(timing, rng, 1)[0])
            accepted = bool(rng.random() >= f)
            x_true = cell_mean(aim, windows, timing.delta) + offset - delta_sub
            if window.start <= x_true < window.end:
                candidates.append((x_true, EVENT_TRUE_CLICK if accepted else EVENT_REJECTED_CLICK))
        if lam > 0.0:
            n_fp = int(rng.poisson(lam * window.duration))
            if n_fp:
                for t_fp in np.sort(rng.uniform(window.start, window.end, n_fp)):
                    candidates.append((float(t_fp), EVENT_FALSE_POSITIVE))
        candidates.sort(key=lambda c: c[0])

        winner = None
        for x, kind in candidates:
            if kind == EVENT_REJECTED_CLICK:
                events.append({"t": pass_start + x, "kind": kind, "cell": state.v_prime})
                continue
            winner = (x, kind)
            break

        hops += 1
        dwell_end = pass_start + window.end

        if winner is not None:
            x_win, kind_win = winner
            t_win = pass_start + x_win
            events.append({"t": t_win, "kind": kind_win, "cell": state.v_prime})
            successor = click_outcome(state, state.v_prime, word, layout)
            selection = {
                "t": t_win,
                "kind": EVENT_SELECTION,
                "phase": _phase_name(state.r),
                "cell": state.v_prime,
                "source": kind_win,
            }
            if state.r == COLUMN_PHASE:
                selection["symbol"] = layout.symbol_at(state.row, state.v_prime)
            events.append(selection)
            clicks += 1
            if isinstance(successor, str) or successor.e >= params.error_limit:
                outcome = successor if isinstance(successor, str) else OUTCOME_FAILURE
                errors = 0 if outcome == OUTCOME_CORRECT else chars - state.m + state.e + 1
                events.append(
                    {"t": t_win, "kind": EVENT_TERMINAL, "outcome": outcome, "errors": errors, "cause": "selection"}
                )
                return events, outcome, scans, time_units, clicks, errors, hops
            if (
                state.r == COLUMN_PHASE
                and selection["symbol"] == layout.delete_symbol
                and (state.e > 0 or state.m > 0)
            ):
                removed = "pending-letter" if state.e > 0 else "written-letter"
                events.append({"t": t_win, "kind": EVENT_DELETE, "removed": removed})
        else:
            successor = miss_successor(state, layout, params.undo_window)
            if (
                state.r == COLUMN_PHASE
                and state.v_prime == len(windows)
                and state.u == params.undo_window - 1
            ):
                events.append({"t": dwell_end, "kind": EVENT_UNDO, "row": state.row})

        entering_first = successor.v_prime == 1
        weight = 2 if entering_first else 1
        scans += weight
        time_units += weight
        if entering_first:
            pass_start = dwell_end
            t_next = pass_start
        else:
            t_next = pass_start + windows[successor.v_prime - 1].start
        events.append(
            {"t": t_next, "kind": EVENT_SCAN, "phase": _phase_name(successor.r), "cell": successor.v_prime, "weight": weight}
        )
        state = successor

        if hops >= horizon:
            errors = chars - state.m + state.e
            events.append(
                {"t": t_next, "kind": EVENT_TERMINAL, "outcome": OUTCOME_FAILURE, "errors": errors, "cause": "timeout"}
            )
            return events, OUTCOME_FAILURE, scans, time_units, clicks, errors, hops


def _decode_fast_click(x: float, group_len: int, t_fast: float, hold: float) -> int:
    """Map a latency-corrected click time onto the pass's cells; 0 when it hits none."""
    if t_fast <= x < group_len * t_fast:
        return int(x // t_fast)
    if group_len * t_fast <= x < group_len * t_fast + hold:
        return group_len
    return 0


def _simulate_fast_word(word, layout, params, fast_params, rng):
    """One fast-mode session; same return shape as :func:`_simulate_slow_word`."""
    timing = params.click_timing
    f = params.switch_noise.f
    lam = params.switch_noise.lam
    t_fast = fast_params.t_fast
    hold = params.t_scan
    k_delta = final_hold_units(hold, t_fast)
    horizon = scan_horizon(word, layout, params)
    chars = len(word)
    row_windows = scan_windows(layout.n_rows, t_fast, final_hold=hold)
    col_windows = {s: scan_windows(layout.row_len(s), t_fast, final_hold=hold) for s in range(1, layout.n_rows + 1)}

    state = StateId(ROW_PHASE, 1, 0, 0, None)
    events = [{"t": 0.0, "kind": EVENT_SCAN, "phase": "row", "cell": 1, "weight": 2}]
    scans = 2
    time_units = 2 + (k_delta - 1 if layout.n_rows == 1 else 0)
    clicks = 0
    errors = 0
    hops = 0
    pass_start = 0.0

    while True:
        windows = row_windows if state.r == ROW_PHASE else col_windows[state.row]
        group_len = len(windows)
        span = windows[-1].end
        phase = _phase_name(state.r)

        if hops + group_len > horizon:
            # the pass cannot finish inside the scan budget: walk the cells
            # that still fit, then abandon the word
            remaining = horizon - hops
            t_fold = pass_start
            for cell in range(2, remaining + 2):
                scans += 1
                time_units += k_delta if cell == group_len else 1
                t_fold = pass_start + windows[cell - 1].start
                events.append({"t": t_fold, "kind": EVENT_SCAN, "phase": phase, "cell": cell, "weight": 1})
            hops += remaining
            errors = chars - state.m + state.e
            events.append(
                {"t": t_fold, "kind": EVENT_TERMINAL, "outcome": OUTCOME_FAILURE, "errors": errors, "cause": "timeout"}
            )
            return events, OUTCOME_FAILURE, scans, time_units, clicks, errors, hops

        pass_events = []
        for cell in range(2, group_len + 1):
            scans += 1
            time_units += k_delta if cell == group_len else 1
            pass_events.append(
                {"t": pass_start + windows[cell - 1].start, "kind": EVENT_SCAN, "phase": phase, "cell": cell, "weight": 1}
            )
        hops += group_len

        aim = intended_cell(state, word, layout)
        candidates = []
        if aim is not WAIT:
            offset = float(sample_click_offsets(timing, rng, 1)[0])
            accepted = bool(rng.random() >= f)
            t_true = cell_mean(aim, windows, timing.delta) + offset
            candidates.append((t_true, EVENT_TRUE_CLICK if accepted else EVENT_REJECTED_CLICK))
        if lam > 0.0:
            n_fp = int(rng.poisson(lam * span))
            if n_fp:
                for t_fp in np.sort(rng.uniform(0.0, span, n_fp)):
                    candidates.append((float(t_fp), EVENT_FALSE_POSITIVE))
        candidates.sort(key=lambda c: c[0])

        winner = None
        for t_ev, kind in candidates:
            pass_events.append({"t": pass_start + min(max(t_ev, 0.0), span), "kind": kind, "phase": phase})
            if kind != EVENT_REJECTED_CLICK and winner is None:
                winner = (t_ev, kind)
        pass_events.sort(key=lambda ev: ev["t"])  # clicks interleave with the racing scan
        events.extend(pass_events)
        decision_t = pass_start + span

        if winner is None:
            successor = miss_successor(replace(state, v_prime=group_len), layout, params.undo_window)
            registered = False
        else:
            t_win, kind_win = winner
            cell = _decode_fast_click(t_win - timing.delta, group_len, t_fast, hold)
            registered = cell > 0
            if not registered:
                # the first registered click decides the pass even when it
                # maps onto no cell: the pass is spent without a selection
                successor = miss_successor(replace(state, v_prime=group_len), layout, params.undo_window)
            else:
                clicks += 1
                successor = click_outcome(state, cell, word, layout)
                selection = {
                    "t": decision_t,
                    "kind": EVENT_SELECTION,
                    "phase": phase,
                    "cell": cell,
                    "source": kind_win,
                }
                if state.r == COLUMN_PHASE:
                    selection["symbol"] = layout.symbol_at(state.row, cell)
                events.append(selection)
                if isinstance(successor, str) or successor.e >= params.error_limit:
                    outcome = successor if isinstance(successor, str) else OUTCOME_FAILURE
                    errors = 0 if outcome == OUTCOME_CORRECT else chars - state.m + state.e + 1
                    events.append(
                        {
                            "t": decision_t,
                            "kind": EVENT_TERMINAL,
                            "outcome": outcome,
                            "errors": errors,
                            "cause": "selection",
                        }
                    )
                    return events, outcome, scans, time_units, clicks, errors, hops
                if (
                    state.r == COLUMN_PHASE
                    and selection["symbol"] == layout.delete_symbol
                    and (state.e > 0 or state.m > 0)
                ):
                    removed = "pending-letter" if state.e > 0 else "written-letter"
                    events.append({"t": decision_t, "kind": EVENT_DELETE, "removed": removed})
        if (
            not registered
            and state.r == COLUMN_PHASE
            and state.u == params.undo_window - 1
        ):
            events.append({"t": decision_t, "kind": EVENT_UNDO, "row": state.row})

        next_len = layout.n_rows if successor.r == ROW_PHASE else layout.row_len(successor.row)
        scans += 2
        time_units += 2 + (k_delta - 1 if next_len == 1 else 0)
        pass_start = decision_t
        events.append(
            {"t": pass_start, "kind": EVENT_SCAN, "phase": _phase_name(successor.r), "cell": 1, "weight": 2}
        )
        state = successor


def run_word(
    word: str,
    layout: GridLayout,
    params,
    mode: str = "slow",
    seed: SeedLike = 0,
    latency: str = "shifted",
) -> SessionLog:
    """Simulate one word-entry session and return its full event log.

    ``params`` is a :class:`~scansim.noise.NoiseParams` in the standard
    mode and a :class:`~scansim.layout.FastParams` in the fast mode.
    ``latency`` picks the decision frame of the standard mode; the fast
    mode always subtracts the known latency before decoding a click, so
    the argument is ignored there.  ``seed`` may be an integer (starting
    a fresh counter-based stream), a :class:`numpy.random.SeedSequence`,
    or an existing :class:`numpy.random.Generator`.

    Example: ``run_word("a_", grid, NoiseParams(), seed=7)`` on a 2x2
    grid with no noise returns a log whose totals read 9 scans, 4 clicks,
    0 errors, whatever the seed.
    """
    _check_latency(latency)
    base, fastp = _split_params(params, mode)
    layout.validate_word(word)
    rng = make_rng(seed)
    if mode == "slow":
        parts = _simulate_slow_word(word, layout, base, latency, rng)
        unit_delay = base.t_scan
        eff_latency = latency
    else:
        parts = _simulate_fast_word(word, layout, base, fastp, rng)
        unit_delay = fastp.t_fast
        eff_latency = "compensated"
    events, outcome, scans, time_units, clicks, errors, hops = parts
    return SessionLog(
        word=word,
        mode=mode,
        latency=eff_latency,
        seed=seed if isinstance(seed, int) else None,
        rng_algorithm=RNG_ALGORITHM,
        unit_delay=unit_delay,
        horizon=scan_horizon(word, layout, base),
        hops=hops,
        outcome=outcome,
        events=events,
        totals={"scans": int(scans), "clicks": int(clicks), "errors": int(errors)},
        time_units=int(time_units),
        seconds=time_units * unit_delay,
    )


# ---------------------------------------------------------------------------
# vectorised batch sampler


@dataclass
class BatchResult:
    """Per-session totals of a vectorised batch of simulated sessions.

    ``outcomes`` codes each session 0 = error, 1 = correct, 2 = failure;
    ``scans``, ``time_units``, ``clicks``, and ``errors`` are parallel
    integer arrays.  ``clicks`` counts selections, so a fast-mode click
    that decodes onto no cell spends its pass without raising the count.
    """

    word: str
    mode: str
    latency: str
    n: int
    seed: Union[int, None]
    rng_algorithm: str
    unit_delay: float
    horizon: int
    outcomes: np.ndarray
    scans: np.ndarray
    time_units: np.ndarray
    clicks: np.ndarray
    errors: np.ndarray

    def _array(self, kind: str) -> np.ndarray:
        arrays = {"scans": self.scans, "time": self.time_units, "clicks": self.clicks, "errors": self.errors}
        try:
            return arrays[kind]
        except KeyError:
            raise ValueError(f"kind must be one of {sorted(arrays)}, got {kind!r}") from None

    def histogram(self, kind: str = "scans", outcome: Union[str, None] = None) -> tuple[np.ndarray, np.ndarray]:
        """Values and counts of one total, optionally restricted to one outcome."""
        values = self._array(kind)
        if outcome is not None:
            if outcome not in _OUTCOME_CODE:
                raise ValueError(f"outcome must be one of {sorted(_OUTCOME_CODE)}, got {outcome!r}")
            values = values[self.outcomes == _OUTCOME_CODE[outcome]]
        return np.unique(values, return_counts=True)

    def outcome_fractions(self) -> dict:
        """Empirical probability of each outcome."""
        return {name: float(np.mean(self.outcomes == code)) for name, code in _OUTCOME_CODE.items()}

    def outcome_split(self) -> OutcomeSplit:
        """Empirical outcome probabilities in the analytic result container."""
        fractions = self.outcome_fractions()
        return OutcomeSplit(
            correct=fractions[OUTCOME_CORRECT],
            error=fractions[OUTCOME_ERROR],
            failure=fractions[OUTCOME_FAILURE],
        )


class _WordTables:
    """Precomputed lookup tables that drive the vectorised bookkeeping.

    Everything a per-session update needs — the aim of every (phase, row,
    progress) combination, the class of every cell, the location of every
    needed letter — is tabulated once by calling the same pure behaviour
    rules the scalar sampler uses, so both samplers enact identical rules.
    """

    LETTER, DELETE, TERMINATOR = 0, 1, 2

    def __init__(self, word: str, layout: GridLayout):
        n_rows = layout.n_rows
        chars = len(word)
        width = max(n_rows, layout.max_row_len) + 1

        self.row_len = np.zeros(n_rows + 1, dtype=np.int64)
        for s in range(1, n_rows + 1):
            self.row_len[s] = layout.row_len(s)

        self.cell_class = np.zeros((n_rows + 1, width), dtype=np.int64)
        for s in range(1, n_rows + 1):
            for j in range(1, layout.row_len(s) + 1):
                symbol = layout.symbol_at(s, j)
                if symbol in layout.terminators:
                    self.cell_class[s, j] = self.TERMINATOR
                elif symbol == layout.delete_symbol:
                    self.cell_class[s, j] = self.DELETE
        self.target_row = np.zeros(chars, dtype=np.int64)
        self.target_col = np.zeros(chars, dtype=np.int64)
        for m, symbol in enumerate(word):
            self.target_row[m], self.target_col[m] = locate(symbol, layout)

        self.row_aim = np.zeros((chars, 2), dtype=np.int64)
        self.col_aim = np.zeros((n_rows + 1, chars, 2), dtype=np.int64)
        for m in range(chars):
            for pending in (0, 1):
                row_state = StateId(ROW_PHASE, 1, m, pending, None)
                self.row_aim[m, pending] = intended_cell(row_state, word, layout)
                for s in range(1, n_rows + 1):
                    col_state = StateId(COLUMN_PHASE, 1, m, pending, 0, s)
                    aim = intended_cell(col_state, word, layout)
                    self.col_aim[s, m, pending] = 0 if aim is WAIT else aim


def _apply_clicks(tables, word, error_limit, registered, is_row, cell, row, m, e,
                  new_is_row, new_v, new_row, new_m, new_e, new_u, out_new, err_add):
    """Shared click bookkeeping for the batch samplers.

    ``cell`` is the selected cell of each registered session.  Mutates the
    ``new_*``/``out_new``/``err_add`` work arrays in place.
    """
    chars = len(word)
    row_click = registered & is_row
    new_is_row[row_click] = False
    new_row[row_click] = cell[row_click]
    new_v[row_click] = 1
    new_u[row_click] = 0

    col_click = registered & ~is_row
    cell_cls = tables.cell_class[row, cell]

    terminator = col_click & (cell_cls == tables.TERMINATOR)
    correct = (
        terminator
        & (e == 0)
        & (m == chars - 1)
        & (row == tables.target_row[chars - 1])
        & (cell == tables.target_col[chars - 1])
    )
    out_new[correct] = _OUTCOME_CODE[OUTCOME_CORRECT]
    wrong_end = terminator & ~correct
    out_new[wrong_end] = _OUTCOME_CODE[OUTCOME_ERROR]
    err_add[wrong_end] = chars - m[wrong_end] + e[wrong_end] + 1

    delete = col_click & (cell_cls == tables.DELETE)
    pending = delete & (e > 0)
    new_e[pending] = e[pending] - 1
    written = delete & (e == 0) & (m > 0)
    new_m[written] = m[written] - 1

    letter = col_click & (cell_cls == tables.LETTER)
    advance = letter & (e == 0) & (row == tables.target_row[m]) & (cell == tables.target_col[m])
    new_m[advance] = m[advance] + 1
    spurious = letter & ~advance
    overflow = spurious & (e + 1 >= error_limit)
    out_new[overflow] = _OUTCOME_CODE[OUTCOME_FAILURE]
    err_add[overflow] = chars - m[overflow] + e[overflow] + 1
    survived = spurious & ~overflow
    new_e[survived] = e[survived] + 1

    back_to_rows = delete | advance | survived
    new_is_row[back_to_rows] = True
    new_v[back_to_rows] = 1
    new_row[back_to_rows] = 0
    new_u[back_to_rows] = 0


def _batch_slow(word, layout, params, latency, n, rng):
    timing = params.click_timing
    f = params.switch_noise.f
    lam = params.switch_noise.lam
    step = params.t_scan
    eff_delta = timing.delta if latency == "shifted" else 0.0
    horizon = scan_horizon(word, layout, params)
    chars = len(word)
    n_rows = layout.n_rows
    tables = _WordTables(word, layout)
    p_fp = -math.expm1(-lam * step)

    is_row = np.ones(n, dtype=bool)
    v = np.ones(n, dtype=np.int64)
    row = np.zeros(n, dtype=np.int64)
    m = np.zeros(n, dtype=np.int64)
    e = np.zeros(n, dtype=np.int64)
    u = np.zeros(n, dtype=np.int64)
    outcomes = np.full(n, -1, dtype=np.int8)
    scans = np.full(n, 2, dtype=np.int64)
    time_units = np.full(n, 2, dtype=np.int64)
    clicks = np.zeros(n, dtype=np.int64)
    errors = np.zeros(n, dtype=np.int64)

    for _ in range(horizon):
        alive = np.flatnonzero(outcomes == -1)
        if alive.size == 0:
            break
        k = alive.size
        offsets = sample_click_offsets(timing, rng, k)
        drop_draw = rng.random(k)
        fp_draw = rng.random(k)

        isr = is_row[alive]
        vi = v[alive]
        rowi = row[alive]
        mi = m[alive]
        ei = e[alive]
        ui = u[alive]
        pending = (ei > 0).astype(np.int64)
        aim = np.where(isr, tables.row_aim[mi, pending], tables.col_aim[rowi, mi, pending])
        group_len = np.where(isr, n_rows, tables.row_len[rowi])

        # a click lands in the dwell's own window or not at all
        x = (aim + 0.5) * step + eff_delta + offsets
        landed = np.floor(x / step).astype(np.int64) == vi
        registered = (fp_draw < p_fp) | ((aim > 0) & landed & (drop_draw >= f))

        new_is_row = isr.copy()
        new_v = vi.copy()
        new_row = rowi.copy()
        new_m = mi.copy()
        new_e = ei.copy()
        new_u = ui.copy()
        out_new = np.full(k, -1, dtype=np.int8)
        err_add = np.zeros(k, dtype=np.int64)

        missed = ~registered
        wrap = missed & (vi == group_len)
        advance = missed & ~wrap
        new_v[advance] = vi[advance] + 1
        row_wrap = wrap & isr
        new_v[row_wrap] = 1
        col_wrap = wrap & ~isr
        undo = col_wrap & (ui == params.undo_window - 1)
        wait_more = col_wrap & ~undo
        new_v[wait_more] = 1
        new_u[wait_more] = ui[wait_more] + 1
        new_is_row[undo] = True
        new_v[undo] = 1
        new_row[undo] = 0
        new_u[undo] = 0

        _apply_clicks(tables, word, params.error_limit, registered, isr, vi, rowi, mi, ei,
                      new_is_row, new_v, new_row, new_m, new_e, new_u, out_new, err_add)

        still_live = out_new == -1
        weight = np.where(still_live, np.where(new_v == 1, 2, 1), 0)
        scans[alive] += weight
        time_units[alive] += weight
        clicks[alive] += registered
        errors[alive] += err_add
        outcomes[alive] = out_new
        is_row[alive] = new_is_row
        v[alive] = new_v
        row[alive] = new_row
        m[alive] = new_m
        e[alive] = new_e
        u[alive] = new_u

    folded = outcomes == -1
    outcomes[folded] = _OUTCOME_CODE[OUTCOME_FAILURE]
    errors[folded] += chars - m[folded] + e[folded]
    return outcomes, scans, time_units, clicks, errors


def _batch_fast(word, layout, params, fast_params, n, rng):
    timing = params.click_timing
    f = params.switch_noise.f
    lam = params.switch_noise.lam
    t_fast = fast_params.t_fast
    hold = params.t_scan
    k_delta = final_hold_units(hold, t_fast)
    horizon = scan_horizon(word, layout, params)
    chars = len(word)
    n_rows = layout.n_rows
    tables = _WordTables(word, layout)

    is_row = np.ones(n, dtype=bool)
    row = np.zeros(n, dtype=np.int64)
    m = np.zeros(n, dtype=np.int64)
    e = np.zeros(n, dtype=np.int64)
    u = np.zeros(n, dtype=np.int64)
    hops = np.zeros(n, dtype=np.int64)
    outcomes = np.full(n, -1, dtype=np.int8)
    scans = np.full(n, 2, dtype=np.int64)
    time_units = np.full(n, 2 + (k_delta - 1 if n_rows == 1 else 0), dtype=np.int64)
    clicks = np.zeros(n, dtype=np.int64)
    errors = np.zeros(n, dtype=np.int64)

    while True:
        length_all = np.where(is_row, n_rows, tables.row_len[row])
        eligible = (outcomes == -1) & (hops + length_all <= horizon)
        alive = np.flatnonzero(eligible)
        if alive.size == 0:
            break
        k = alive.size
        offsets = sample_click_offsets(timing, rng, k)
        drop_draw = rng.random(k)
        fp_first = rng.exponential(1.0 / lam, k) if lam > 0.0 else None

        isr = is_row[alive]
        rowi = row[alive]
        mi = m[alive]
        ei = e[alive]
        ui = u[alive]
        group_len = length_all[alive]
        span = group_len * t_fast + hold
        pending = (ei > 0).astype(np.int64)
        aim = np.where(isr, tables.row_aim[mi, pending], tables.col_aim[rowi, mi, pending])

        # race the intended click (if any survives the switch) against the
        # first false positive of the pass; the earliest one is decoded
        mean_true = np.where(aim == group_len, group_len * t_fast + 0.5 * hold, (aim + 0.5) * t_fast) + timing.delta
        t_true = mean_true + offsets
        accepted = (aim > 0) & (drop_draw >= f)
        t_winner = np.where(accepted, t_true, np.inf)
        if fp_first is not None:
            t_winner = np.minimum(t_winner, np.where(fp_first < span, fp_first, np.inf))
        has_click = np.isfinite(t_winner)
        x = np.where(has_click, t_winner, -1.0) - timing.delta
        main = np.floor(x / t_fast).astype(np.int64)
        in_main = has_click & (main >= 1) & (main < group_len)
        in_hold = has_click & (x >= group_len * t_fast) & (x < span)
        cell = np.where(in_main, main, np.where(in_hold, group_len, 0))
        registered = cell > 0

        hops[alive] += group_len
        scans[alive] += group_len - 1
        time_units[alive] += np.where(group_len >= 2, group_len - 2 + k_delta, 0)

        new_is_row = isr.copy()
        new_v = np.ones(k, dtype=np.int64)
        new_row = rowi.copy()
        new_m = mi.copy()
        new_e = ei.copy()
        new_u = ui.copy()
        out_new = np.full(k, -1, dtype=np.int8)
        err_add = np.zeros(k, dtype=np.int64)

        missed = ~registered
        col_miss = missed & ~isr
        undo = col_miss & (ui == params.undo_window - 1)
        wait_more = col_miss & ~undo
        new_u[wait_more] = ui[wait_more] + 1
        new_is_row[undo] = True
        new_row[undo] = 0
        new_u[undo] = 0

        _apply_clicks(tables, word, params.error_limit, registered, isr, cell, rowi, mi, ei,
                      new_is_row, new_v, new_row, new_m, new_e, new_u, out_new, err_add)

        still_live = out_new == -1
        next_len = np.where(new_is_row, n_rows, tables.row_len[new_row])
        scans[alive] += np.where(still_live, 2, 0)
        time_units[alive] += np.where(still_live, 2 + (k_delta - 1) * (next_len == 1), 0)
        clicks[alive] += registered
        errors[alive] += err_add
        outcomes[alive] = out_new
        is_row[alive] = new_is_row
        row[alive] = new_row
        m[alive] = new_m
        e[alive] = new_e
        u[alive] = new_u

    # sessions whose next pass no longer fits the scan budget: walk the
    # cells that still fit, then abandon the word
    folded = outcomes == -1
    if np.any(folded):
        length_all = np.where(is_row, n_rows, tables.row_len[row])[folded]
        remaining = horizon - hops[folded]
        scans[folded] += remaining
        time_units[folded] += remaining + (k_delta - 1) * (
            (remaining >= 1) & (remaining == length_all - 1)
        )
        errors[folded] += chars - m[folded] + e[folded]
        outcomes[folded] = _OUTCOME_CODE[OUTCOME_FAILURE]
    return outcomes, scans, time_units, clicks, errors


def run_batch(
    word: str,
    layout: GridLayout,
    params,
    mode: str = "slow",
    n: int = 1000,
    seed: SeedLike = 0,
    latency: str = "shifted",
) -> BatchResult:
    """Simulate ``n`` independent sessions of one word with vectorised draws.

    Statistically equivalent to calling :func:`run_word` ``n`` times, but
    orders of magnitude faster; only per-session totals are kept.  The
    two samplers share their behaviour rules yet draw noise through
    different code paths, so their agreement (and the agreement of either
    with the analytic chain) is a meaningful consistency check.
    """
    _check_latency(latency)
    base, fastp = _split_params(params, mode)
    layout.validate_word(word)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = make_rng(seed)
    if mode == "slow":
        arrays = _batch_slow(word, layout, base, latency, n, rng)
        unit_delay = base.t_scan
        eff_latency = latency
    else:
        arrays = _batch_fast(word, layout, base, fastp, n, rng)
        unit_delay = fastp.t_fast
        eff_latency = "compensated"
    outcomes, scans, time_units, clicks, errors = arrays
    return BatchResult(
        word=word,
        mode=mode,
        latency=eff_latency,
        n=n,
        seed=seed if isinstance(seed, int) else None,
        rng_algorithm=RNG_ALGORITHM,
        unit_delay=unit_delay,
        horizon=scan_horizon(word, layout, base),
        outcomes=outcomes,
        scans=scans,
        time_units=time_units,
        clicks=clicks,
        errors=errors,
    )


# ---------------------------------------------------------------------------
# phrase-level reductions


@dataclass(frozen=True)
class MetricCI:
    """Sample mean with its normal-approximation 95% confidence interval."""

    mean: float
    std: float
    ci_low: float
    ci_high: float


@dataclass
class PhraseResult:
    """Per-session phrase totals reduced to entry-rate metrics.

    ``wpm`` counts standard five-character words per minute; ``cpc`` is
    clicks per written character, ``cer`` the error charge per character,
    and ``p_fail`` the fraction of word attempts abandoned or failed.
    The arrays hold one entry per simulated session; ``logs`` keeps the
    underlying word logs when the scalar sampler ran with
    ``keep_logs=True``.
    """

    words: list
    mode: str
    latency: str
    n_sessions: int
    chars: int
    unit_delay: float
    wpm: MetricCI
    cpc: MetricCI
    cer: MetricCI
    p_fail: MetricCI
    scans: np.ndarray
    time_units: np.ndarray
    clicks: np.ndarray
    errors: np.ndarray
    failed_words: np.ndarray
    seconds: np.ndarray
    logs: Union[list, None] = None


def _metric_ci(values: np.ndarray) -> MetricCI:
    n = values.size
    mean = float(math.fsum(values.tolist()) / n)
    if n > 1:
        std = float(np.std(values, ddof=1))
    else:
        std = 0.0
    half = 1.96 * std / math.sqrt(n)
    return MetricCI(mean=mean, std=std, ci_low=mean - half, ci_high=mean + half)


def _reduce_phrase(words, mode, latency, chars, unit_delay,
                   scans, time_units, clicks, errors, failed_words, logs=None) -> PhraseResult:
    seconds = time_units.astype(np.float64) * unit_delay
    minutes = seconds / 60.0
    wpm = (chars / 5.0) / minutes
    cpc = clicks.astype(np.float64) / chars
    cer = errors.astype(np.float64) / chars
    fail_fraction = failed_words.astype(np.float64) / len(words)
    return PhraseResult(
        words=list(words),
        mode=mode,
        latency=latency,
        n_sessions=int(scans.size),
        chars=int(chars),
        unit_delay=float(unit_delay),
        wpm=_metric_ci(wpm),
        cpc=_metric_ci(cpc),
        cer=_metric_ci(cer),
        p_fail=_metric_ci(fail_fraction),
        scans=scans,
        time_units=time_units,
        clicks=clicks,
        errors=errors,
        failed_words=failed_words,
        seconds=seconds,
        logs=logs,
    )


def _check_words(words) -> int:
    if not words:
        raise ValueError("a phrase needs at least one word")
    return sum(len(w) for w in words)


def run_phrase(
    words: Sequence[str],
    layout: GridLayout,
    params,
    mode: str = "slow",
    seeds: Sequence[int] = (0,),
    latency: str = "shifted",
    keep_logs: bool = False,
) -> PhraseResult:
    """Simulate a phrase word by word, once per seed, with full logs.

    Each seed runs one complete session over all ``words``; every word
    gets its own independent sub-stream spawned from the seed, so word
    order never perturbs the draws of later words.  With a single word
    and a single seed the phrase totals equal that word's
    :class:`SessionLog` totals exactly.  Metrics are averaged across
    seeds; with one seed the confidence intervals collapse onto the mean.
    """
    chars = _check_words(words)
    seeds = list(seeds)
    if not seeds:
        raise ValueError("run_phrase needs at least one seed")
    n = len(seeds)
    scans = np.zeros(n, dtype=np.int64)
    time_units = np.zeros(n, dtype=np.int64)
    clicks = np.zeros(n, dtype=np.int64)
    errors = np.zeros(n, dtype=np.int64)
    failed = np.zeros(n, dtype=np.int64)
    logs: list = []
    for i, seed in enumerate(seeds):
        children = np.random.SeedSequence(seed).spawn(len(words))
        session_logs = []
        for word, child in zip(words, children):
            log = run_word(word, layout, params, mode=mode, seed=child, latency=latency)
            scans[i] += log.totals["scans"]
            time_units[i] += log.time_units
            clicks[i] += log.totals["clicks"]
            errors[i] += log.totals["errors"]
            failed[i] += log.outcome != OUTCOME_CORRECT
            if keep_logs:
                session_logs.append(log)
        if keep_logs:
            logs.append(session_logs)
    base, fastp = _split_params(params, mode)
    unit_delay = base.t_scan if mode == "slow" else fastp.t_fast
    eff_latency = latency if mode == "slow" else "compensated"
    return _reduce_phrase(words, mode, eff_latency, chars, unit_delay,
                          scans, time_units, clicks, errors, failed,
                          logs=logs if keep_logs else None)


def phrase_batch(
    words: Sequence[str],
    layout: GridLayout,
    params,
    mode: str = "slow",
    n: int = 1000,
    seed: "int | np.random.SeedSequence" = 0,
    latency: str = "shifted",
) -> PhraseResult:
    """Phrase metrics from ``n`` vectorised sessions per word.

    The heavy-duty counterpart of :func:`run_phrase`: each word runs as
    one :func:`run_batch` on its own sub-stream, and session ``i`` of the
    phrase combines row ``i`` of every word's batch.
    """
    chars = _check_words(words)
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = root.spawn(len(words))
    scans = np.zeros(n, dtype=np.int64)
    time_units = np.zeros(n, dtype=np.int64)
    clicks = np.zeros(n, dtype=np.int64)
    errors = np.zeros(n, dtype=np.int64)
    failed = np.zeros(n, dtype=np.int64)
    unit_delay = 0.0
    eff_latency = latency
    for word, child in zip(words, children):
        batch = run_batch(word, layout, params, mode=mode, n=n, seed=child, latency=latency)
        scans += batch.scans
        time_units += batch.time_units
        clicks += batch.clicks
        errors += batch.errors
        failed += batch.outcomes != _OUTCOME_CODE[OUTCOME_CORRECT]
        unit_delay = batch.unit_delay
        eff_latency = batch.latency
    return _reduce_phrase(words, mode, eff_latency, chars, unit_delay,
                          scans, time_units, clicks, errors, failed)


# ---------------------------------------------------------------------------
# empirical-vs-analytic scoring


@dataclass(frozen=True)
class CompareReport:
    """Point-by-point agreement between a histogram and a distribution.

    Each support point gets a binomial z-score: the exact binomial tail
    probability of a count at least (or at most) as extreme as the one
    observed, expressed on the normal scale.  Where the expected count is
    large this equals the familiar ``(phat - p) / sqrt(p (1 - p) / n)``;
    where it is small the exact tail keeps the score honest — a single
    stray sample on a barely-possible value is not a three-sigma event,
    while any sample on an impossible value scores infinite.  ``passed``
    requires at least ``min_fraction`` of the points to sit within
    ``z_limit``.
    """

    n_samples: int
    n_points: int
    fraction_within: float
    max_abs_z: float
    z_limit: float
    min_fraction: float
    passed: bool


def _binomial_z(count: int, n: int, p: float) -> float:
    """Signed z-equivalent of the exact binomial tail of ``count`` out of ``n``."""
    tail_high = float(stats.binom.sf(count - 1, n, p))  # P(X >= count)
    tail_low = float(stats.binom.cdf(count, n, p))  # P(X <= count)
    if tail_high < tail_low:
        return max(0.0, float(stats.norm.isf(tail_high)))
    return -max(0.0, float(stats.norm.isf(tail_low)))


def compare(histogram: tuple, pmf: Pmf, z_limit: float = 3.0, min_fraction: float = 0.99) -> CompareReport:
    """Score an empirical ``(values, counts)`` histogram against a :class:`~scansim.pmf.Pmf`.

    Disagreement — including samples on values the distribution rules
    out — is reported in the returned :class:`CompareReport`, never
    raised.  Only a malformed histogram (mismatched lengths, fractional
    or negative counts, duplicate values, an empty sample) raises
    :class:`ValueError`.
    """
    values, counts = histogram
    values = np.asarray(values)
    counts = np.asarray(counts)
    if values.shape != counts.shape or values.ndim != 1:
        raise ValueError("a histogram is two parallel one-dimensional arrays: values and counts")
    if values.size and not (
        np.issubdtype(values.dtype, np.integer) and np.issubdtype(counts.dtype, np.integer)
    ):
        raise ValueError("histogram values and counts must be integers")
    if np.any(counts < 0):
        raise ValueError("histogram counts must be >= 0")
    n = int(counts.sum())
    if n == 0:
        raise ValueError("a histogram needs at least one sample")
    if np.unique(values).size != values.size:
        raise ValueError("histogram values must be unique")

    observed = {int(val): int(cnt) for val, cnt in zip(values, counts) if cnt > 0}
    points = set(observed)
    points.update(int(k) for k, p in zip(pmf.support, pmf.probs) if p > 0.0)

    within = 0
    max_abs_z = 0.0
    for point in sorted(points):
        z = _binomial_z(observed.get(point, 0), n, float(pmf.p(point)))
        if abs(z) <= z_limit:
            within += 1
        max_abs_z = max(max_abs_z, abs(z))
    fraction = within / len(points)
    return CompareReport(
        n_samples=n,
        n_points=len(points),
        fraction_within=fraction,
        max_abs_z=max_abs_z,
        z_limit=z_limit,
        min_fraction=min_fraction,
        passed=fraction >= min_fraction,
    )
