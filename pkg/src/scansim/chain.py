"""Absorbing Markov chain over the states of a scanning interface writing one word.

Writing a word on a row/column scanning keyboard is modelled as a Markov
chain with one step per scanned cell.  A live state records the scanning
phase (row scan or column scan of a selected row), the cell currently
highlighted, how many correct letters have been written, how many spurious
letters are pending deletion, and -- during a column scan -- how many column
group scans have passed while the user waits out a wrong row selection.
Three absorbing terminals end the word: ``error`` (a terminator click that
completes the wrong text), ``correct`` (the intended text), and ``failure``
(too many spurious letters, or the time-out horizon).

The user model is deterministic: the intent of every state is the cell that
makes progress toward the target word, the delete key when spurious letters
are pending, or no cell at all (waiting out an undo) when the needed symbol
is unreachable from the selected row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .layout import FastParams, GridLayout, final_hold_units, locate
from .noise import WAIT, NoiseParams, miss_prob, overlap_prob, scan_windows

__all__ = [
    "ROW_PHASE",
    "COLUMN_PHASE",
    "OUTCOME_ERROR",
    "OUTCOME_CORRECT",
    "OUTCOME_FAILURE",
    "OUTCOMES",
    "StateId",
    "Transition",
    "ScanChain",
    "UnsupportedConfiguration",
    "intended_cell",
    "click_outcome",
    "miss_successor",
    "scan_horizon",
    "build_slow",
    "build_fast",
    "sequence_probability",
]

#: Phase markers: scanning over rows, or over the columns of a selected row.
ROW_PHASE = 1
COLUMN_PHASE = 0

#: Labels of the three absorbing terminals, in state-numbering order.
OUTCOME_ERROR = "error"
OUTCOME_CORRECT = "correct"
OUTCOME_FAILURE = "failure"
OUTCOMES = (OUTCOME_ERROR, OUTCOME_CORRECT, OUTCOME_FAILURE)


class UnsupportedConfiguration(ValueError):
    """A parameter combination this analytic model cannot represent."""


@dataclass(frozen=True)
class StateId:
    """Identity of one live chain state.

    ``r`` is the phase (:data:`ROW_PHASE` or :data:`COLUMN_PHASE`) and
    ``v_prime`` the 1-based cell currently highlighted within its group:
    a row index during a row scan, a column index during a column scan.
    ``m`` counts correct letters already written, ``e`` counts pending
    spurious letters.  During a column scan, ``row`` is the selected row and
    ``u`` counts the column group scans completed while the user waits for
    a wrong row selection to be undone; both are ``None`` in a row scan.
    """

    r: int
    v_prime: int
    m: int
    e: int
    u: Union[int, None]
    row: Union[int, None] = None

    def __post_init__(self) -> None:
        if self.r not in (ROW_PHASE, COLUMN_PHASE):
            raise ValueError(f"phase r must be {ROW_PHASE} or {COLUMN_PHASE}, got {self.r}")
        if self.v_prime < 1:
            raise ValueError(f"v_prime must be >= 1, got {self.v_prime}")
        if self.m < 0 or self.e < 0:
            raise ValueError("m and e must be >= 0")
        if self.r == ROW_PHASE:
            if self.u is not None or self.row is not None:
                raise ValueError("row-scan states carry no undo counter and no selected row")
        else:
            if self.u is None or self.row is None:
                raise ValueError("column-scan states need an undo counter and a selected row")


@dataclass(frozen=True)
class Transition:
    """One labelled outgoing edge: a click or a miss, and where it leads."""

    kind: str
    target: int
    prob: float


def intended_cell(state: StateId, word: str, layout: GridLayout) -> "int | object":
    """Cell the user aims for in ``state``, or :data:`WAIT` for none.

    The target symbol is the delete key when spurious letters are pending,
    otherwise the next character of ``word``.  During a row scan the user
    aims at the target's row.  During a column scan the user aims at the
    target's column if the selected row holds it; in a wrong row the user
    aims at the delete key when clicking it is free of cost (nothing written
    yet, nothing pending) and it is available, and otherwise waits the undo
    window out.
    """
    target = layout.delete_symbol if state.e > 0 else word[state.m]
    t_row, t_col = locate(target, layout)
    if state.r == ROW_PHASE:
        return t_row
    if t_row == state.row:
        return t_col
    if state.e == 0 and state.m == 0:
        d_row, d_col = locate(layout.delete_symbol, layout)
        if d_row == state.row:
            return d_col
    return WAIT


def click_outcome(state: StateId, cell: int, word: str, layout: GridLayout) -> "StateId | str":
    """State reached when a click fires while ``cell`` of ``state``'s group is lit.

    A click during a row scan selects that row and starts its column scan.
    A click during a column scan selects the symbol under the cell: the
    word's own terminator at the right moment completes the word
    (``correct``); any other terminator click ends it wrong (``error``);
    the delete key removes the last pending spurious letter, or -- with
    nothing pending -- the last written letter, or does nothing at all;
    the next needed letter advances the word when nothing is pending; any
    other symbol is spurious and fails the word once the spurious limit
    ``e + 1`` reaches the configured error limit (encoded by the caller
    mapping ``e`` overflow to ``failure``).
    """
    if state.r == ROW_PHASE:
        if not 1 <= cell <= layout.n_rows:
            raise IndexError(f"row {cell} outside 1..{layout.n_rows}")
        return StateId(COLUMN_PHASE, 1, state.m, state.e, 0, cell)

    symbol = layout.symbol_at(state.row, cell)
    m, e = state.m, state.e

    if symbol in layout.terminators:
        if e == 0 and m == len(word) - 1 and symbol == word[-1]:
            return OUTCOME_CORRECT
        return OUTCOME_ERROR
    if symbol == layout.delete_symbol:
        if e > 0:
            return StateId(ROW_PHASE, 1, m, e - 1, None)
        if m > 0:
            return StateId(ROW_PHASE, 1, m - 1, 0, None)
        return StateId(ROW_PHASE, 1, 0, 0, None)
    if e == 0 and symbol == word[m]:
        return StateId(ROW_PHASE, 1, m + 1, 0, None)
    return StateId(ROW_PHASE, 1, m, e + 1, None)


def miss_successor(state: StateId, layout: GridLayout, undo_window: int) -> StateId:
    """State reached when ``state``'s cell passes without a click.

    Row scans cycle through the rows.  Column scans advance through the
    selected row's cells; after the last cell the group restarts, and once
    ``undo_window`` full column group scans have passed the row selection
    is cancelled and scanning resumes from the first row.
    """
    if state.r == ROW_PHASE:
        nxt = state.v_prime + 1 if state.v_prime < layout.n_rows else 1
        return StateId(ROW_PHASE, nxt, state.m, state.e, None)
    group_len = layout.row_len(state.row)
    if state.v_prime < group_len:
        return StateId(COLUMN_PHASE, state.v_prime + 1, state.m, state.e, state.u, state.row)
    if state.u < undo_window - 1:
        return StateId(COLUMN_PHASE, 1, state.m, state.e, state.u + 1, state.row)
    return StateId(ROW_PHASE, 1, state.m, state.e, None)


def scan_horizon(word: str, layout: GridLayout, params: NoiseParams) -> int:
    """Scan-step budget before a word is abandoned as a failure.

    ``kappa`` times the word length times the grid dimensions, rounded up
    with a small guard against floating error for integer-valued products.
    """
    return int(math.ceil(params.kappa * len(word) * layout.n_rows * layout.max_row_len - 1e-9))


def _enumerate_states(word: str, layout: GridLayout, params: NoiseParams) -> list[StateId]:
    """All live states, in the canonical numbering order.

    States are grouped into blocks by ``(m, e)`` -- ``m`` outermost -- and
    each block lists the row-scan states first, then the column-scan states
    ordered by undo counter, selected row, and cell.
    """
    states: list[StateId] = []
    for m in range(len(word)):
        for e in range(params.error_limit):
            for v in range(1, layout.n_rows + 1):
                states.append(StateId(ROW_PHASE, v, m, e, None))
            for u in range(params.undo_window):
                for s in range(1, layout.n_rows + 1):
                    for j in range(1, layout.row_len(s) + 1):
                        states.append(StateId(COLUMN_PHASE, j, m, e, u, s))
    return states


@dataclass
class ScanChain:
    """Finished chain for one (word, layout, parameters, mode) combination.

    States are numbered from 1: the live states first, in enumeration
    order, then the three terminals ``error``, ``correct``, ``failure``.
    ``transitions[i]`` lists the outgoing edges of live state ``i + 1``;
    edges with zero probability are omitted.

    ``scan_weights[n - 1]`` is the number of scan events counted on entering
    state ``n``: 2 for the first cell of a group (it carries the audible
    tick), 1 for every other live cell, and 0 for terminals.  The count is
    the same in both scanning modes.

    ``time_weights[n - 1]`` is the dwell duration of the same entry,
    expressed in units of the per-cell delay (the standard delay in slow
    mode, the reduced delay in fast mode).  In slow mode it equals
    ``scan_weights``.  In fast mode the final cell of a group holds for the
    full standard delay, so its weight is ``k_delta`` instead of 1; summing
    ``time_weights`` along a walk and multiplying by the per-cell delay
    yields the wall-clock duration.

    ``horizon`` is the time-out in scan steps; a word still live after
    ``horizon`` steps is folded into ``failure``.
    """

    word: str
    layout: GridLayout
    params: NoiseParams
    mode: str
    latency: str
    fast_params: Union[FastParams, None]
    k_delta: int
    states: list[StateId]
    transitions: list[list[Transition]]
    scan_weights: np.ndarray
    time_weights: np.ndarray
    horizon: int

    @property
    def n_live(self) -> int:
        return len(self.states)

    @property
    def n_states(self) -> int:
        return self.n_live + 3

    @property
    def error_index(self) -> int:
        return self.n_live + 1

    @property
    def correct_index(self) -> int:
        return self.n_live + 2

    @property
    def failure_index(self) -> int:
        return self.n_live + 3

    @property
    def terminal_indices(self) -> tuple[int, int, int]:
        return (self.error_index, self.correct_index, self.failure_index)

    def outcome_of(self, index: int) -> str:
        """Terminal label for a terminal state number."""
        mapping = {
            self.error_index: OUTCOME_ERROR,
            self.correct_index: OUTCOME_CORRECT,
            self.failure_index: OUTCOME_FAILURE,
        }
        try:
            return mapping[index]
        except KeyError:
            raise ValueError(f"state {index} is not a terminal") from None

    @cached_property
    def state_numbers(self) -> dict[StateId, int]:
        """1-based number of every live state."""
        return {state: i + 1 for i, state in enumerate(self.states)}

    def number_of(self, state: StateId) -> int:
        return self.state_numbers[state]

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Outgoing edges of all live states as flat arrays.

        Returns ``(src, dst, prob, is_click)`` with 0-based state indices;
        terminal self-loops are not included.
        """
        src: list[int] = []
        dst: list[int] = []
        prob: list[float] = []
        is_click: list[bool] = []
        for i, edges in enumerate(self.transitions):
            for edge in edges:
                src.append(i)
                dst.append(edge.target - 1)
                prob.append(edge.prob)
                is_click.append(edge.kind == "click")
        return (
            np.asarray(src, dtype=np.int64),
            np.asarray(dst, dtype=np.int64),
            np.asarray(prob, dtype=np.float64),
            np.asarray(is_click, dtype=bool),
        )

    def transition_prob(self, a: int, b: int) -> float:
        """Single-step probability of hopping from state ``a`` to state ``b``."""
        if not (1 <= a <= self.n_states) or not (1 <= b <= self.n_states):
            raise IndexError(f"state numbers must lie in 1..{self.n_states}")
        if a > self.n_live:
            return 1.0 if b == a else 0.0
        return sum(edge.prob for edge in self.transitions[a - 1] if edge.target == b)


def _group_geometry(chain_mode: str, group_len: int, params: NoiseParams, fast_params: Union[FastParams, None]):
    if chain_mode == "slow":
        return scan_windows(group_len, params.t_scan)
    return scan_windows(group_len, fast_params.t_fast, final_hold=params.t_scan)


def _first_and_final(state: StateId, layout: GridLayout) -> tuple[bool, bool]:
    group_len = layout.n_rows if state.r == ROW_PHASE else layout.row_len(state.row)
    return state.v_prime == 1, state.v_prime == group_len


def _build(
    word: str,
    layout: GridLayout,
    params: NoiseParams,
    mode: str,
    fast_params: Union[FastParams, None],
    latency: str,
) -> ScanChain:
    if latency not in ("shifted", "compensated"):
        raise ValueError(f"latency must be 'shifted' or 'compensated', got {latency!r}")
    layout.validate_word(word)

    if mode == "fast":
        if params.switch_noise.lam > 0:
            raise UnsupportedConfiguration(
                "the fast-mode chain assumes no false positives (lam = 0); "
                "use the montecarlo module to simulate fast scanning with lam > 0"
            )
        k_delta = final_hold_units(params.t_scan, fast_params.t_fast)
        # decisions are made on the click time minus the known latency, so
        # the latency never shifts the effective click-time distribution
        eff_timing = replace(params.click_timing, delta=0.0)
    else:
        k_delta = 1
        eff_delta = params.click_timing.delta if latency == "shifted" else 0.0
        eff_timing = replace(params.click_timing, delta=eff_delta)
    eff_params = replace(params, click_timing=eff_timing)

    states = _enumerate_states(word, layout, params)
    n_live = len(states)
    number = {state: i + 1 for i, state in enumerate(states)}
    terminal_number = {
        OUTCOME_ERROR: n_live + 1,
        OUTCOME_CORRECT: n_live + 2,
        OUTCOME_FAILURE: n_live + 3,
    }

    def target_number(outcome: "StateId | str") -> int:
        if isinstance(outcome, StateId):
            if outcome.e >= params.error_limit:
                return terminal_number[OUTCOME_FAILURE]
            return number[outcome]
        return terminal_number[outcome]

    row_windows = _group_geometry(mode, layout.n_rows, params, fast_params)
    col_windows = {s: _group_geometry(mode, layout.row_len(s), params, fast_params) for s in range(1, layout.n_rows + 1)}

    f = params.switch_noise.f
    transitions: list[list[Transition]] = []
    for state in states:
        windows = row_windows if state.r == ROW_PHASE else col_windows[state.row]
        group_len = len(windows)
        aim = intended_cell(state, word, layout)
        succ_miss = number[miss_successor(state, layout, params.undo_window)]
        edges: list[Transition] = []

        if mode == "slow":
            p_miss = miss_prob(state.v_prime, aim, eff_params, windows)
            p_click = 1.0 - p_miss
            if p_click > 0.0:
                outcome = click_outcome(state, state.v_prime, word, layout)
                edges.append(Transition("click", target_number(outcome), p_click))
            if p_miss > 0.0:
                edges.append(Transition("miss", succ_miss, p_miss))
        else:
            if state.v_prime < group_len:
                edges.append(Transition("miss", succ_miss, 1.0))
            else:
                p_cells = []
                for cell in range(1, group_len + 1):
                    if aim is WAIT:
                        p_cells.append(0.0)
                    else:
                        p_cells.append((1.0 - f) * overlap_prob(cell, aim, eff_timing, windows))
                merged: dict[tuple[str, int], float] = {}
                order: list[tuple[str, int]] = []
                for cell, p in enumerate(p_cells, start=1):
                    if p <= 0.0:
                        continue
                    outcome = click_outcome(state, cell, word, layout)
                    key = ("click", target_number(outcome))
                    if key not in merged:
                        merged[key] = 0.0
                        order.append(key)
                    merged[key] += p
                p_miss = 1.0 - math.fsum(p_cells)
                for kind, target in order:
                    edges.append(Transition(kind, target, merged[(kind, target)]))
                if p_miss > 0.0:
                    edges.append(Transition("miss", succ_miss, p_miss))

        total = math.fsum(edge.prob for edge in edges)
        if abs(total - 1.0) > 1e-12:
            raise AssertionError(f"outgoing probabilities of {state} sum to {total!r}")
        transitions.append(edges)

    scan_w = np.zeros(n_live + 3, dtype=np.float64)
    time_w = np.zeros(n_live + 3, dtype=np.float64)
    for i, state in enumerate(states):
        first, final = _first_and_final(state, layout)
        w = 2.0 if first else 1.0
        scan_w[i] = w
        time_w[i] = w + (k_delta - 1.0 if final else 0.0)

    horizon = scan_horizon(word, layout, params)

    return ScanChain(
        word=word,
        layout=layout,
        params=params,
        mode=mode,
        latency=latency,
        fast_params=fast_params,
        k_delta=k_delta,
        states=states,
        transitions=transitions,
        scan_weights=scan_w,
        time_weights=time_w,
        horizon=horizon,
    )


def build_slow(
    word: str,
    layout: GridLayout,
    params: NoiseParams,
    latency: str = "shifted",
) -> ScanChain:
    """Chain for the standard scanning mode, one step per dwelled cell.

    ``latency`` selects how the click latency enters the click-time model:
    ``"shifted"`` leaves the observed click time displaced by the latency
    (an interface that is unaware of it), ``"compensated"`` cancels it (an
    interface that knows the latency and corrects the timing, as any rule
    that adapts the dwell to the measured latency must).
    """
    return _build(word, layout, params, "slow", None, latency)


def build_fast(word: str, layout: GridLayout, fast_params: FastParams) -> ScanChain:
    """Chain for the fast scanning mode with decisions deferred to group ends.

    Cells pass at the fast dwell with no chance to react mid-group; at the
    final, held cell the single click (if any) is attributed to the cell
    whose window contains its latency-corrected time.  The state set and
    numbering match :func:`build_slow` for the same word and parameters.
    """
    return _build(word, layout, fast_params.base, "fast", fast_params, "compensated")


def sequence_probability(chain: ScanChain, sequence: Sequence[int]) -> float:
    """Probability that the chain visits exactly the given state numbers in order.

    The sequence must start at state 1, where every word begins.  The first
    cell of a group occupies two scan steps (its tick and itself), so a
    single leading repeat of state 1 is a unit-probability dwell; every
    other consecutive pair must be joined by a transition, and any pair that
    is not makes the whole sequence impossible (probability 0).
    """
    if len(sequence) == 0:
        raise ValueError("sequence must contain at least one state")
    for n in sequence:
        if not 1 <= n <= chain.n_states:
            raise ValueError(f"state number {n} outside 1..{chain.n_states}")
    if sequence[0] != 1:
        raise ValueError("state sequences start at state 1")
    prob = 1.0
    for i in range(len(sequence) - 1):
        a, b = sequence[i], sequence[i + 1]
        step = chain.transition_prob(a, b)
        if step == 0.0 and i == 0 and a == b == 1:
            step = 1.0  # the tick dwell on the opening cell
        prob *= step
        if prob == 0.0:
            return 0.0
    return prob
