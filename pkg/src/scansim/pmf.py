"""Exact distributions of scan effort, click counts, and residual errors.

Every quantity here is computed by dynamic programming over the word chain
built in :mod:`scansim.chain` — no sampling is involved.  A walk through the
chain accumulates an integer count: scan units (each entered state costs its
scan weight) or switch activations (each click edge costs one).  The joint
distribution of ``(count, state)`` is pushed forward one hop at a time; any
walk still live after the chain's horizon is folded into the failure
terminal, mirroring the scan-budget cut-off of the interface.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import sparse

from .chain import (
    OUTCOME_CORRECT,
    OUTCOME_ERROR,
    OUTCOME_FAILURE,
    OUTCOMES,
    ScanChain,
)

__all__ = [
    "Pmf",
    "OutcomeSplit",
    "CountMoments",
    "occupancy",
    "outcome_probabilities",
    "counts_pmf",
    "scans_pmf",
    "time_pmf",
    "clicks_pmf",
    "errors_pmf",
    "count_moments",
    "min_support",
    "summarize",
]

#: Probability below which a count bin is treated as numerically empty.
_TRIM_TOL = 1e-15

#: Mass allowed past the count cap before the DP refuses to lump it silently.
_OVERFLOW_TOL = 1e-10

#: Caps up to this size skip the moment-based estimate and keep every bin.
_EXACT_CAP_LIMIT = 4096


@dataclass(frozen=True, eq=False)
class Pmf:
    """A probability mass function over non-negative integer counts.

    ``probs`` need not sum to one: conditional slices (for example, the scan
    cost of walks that end in the correct terminal) keep their raw mass so
    that callers can renormalise explicitly when they mean to.
    """

    support: np.ndarray
    probs: np.ndarray

    def __post_init__(self) -> None:
        support = np.asarray(self.support, dtype=np.int64)
        probs = np.asarray(self.probs, dtype=np.float64)
        if support.ndim != 1 or probs.ndim != 1 or support.shape != probs.shape:
            raise ValueError("support and probs must be 1-d arrays of equal length")
        if support.size and np.any(np.diff(support) <= 0):
            raise ValueError("support must be strictly increasing")
        if np.any(probs < -1e-12):
            raise ValueError("probabilities must be non-negative")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", np.maximum(probs, 0.0))

    @property
    def mass(self) -> float:
        return float(math.fsum(self.probs))

    def p(self, k: int) -> float:
        """Probability of the exact count ``k`` (0.0 off the support)."""
        hits = np.nonzero(self.support == k)[0]
        return float(self.probs[hits[0]]) if hits.size else 0.0

    def mean(self) -> float:
        mass = self.mass
        if mass == 0.0:
            return math.nan
        return float(math.fsum(self.support * self.probs)) / mass

    def var(self) -> float:
        mass = self.mass
        if mass == 0.0:
            return math.nan
        mean = self.mean()
        centred = (self.support - mean) ** 2
        return max(float(math.fsum(centred * self.probs)) / mass, 0.0)

    def std(self) -> float:
        return math.sqrt(self.var())

    def trimmed(self, tol: float = _TRIM_TOL) -> "Pmf":
        """Drop bins whose probability is at most ``tol``."""
        keep = self.probs > tol
        return Pmf(self.support[keep], self.probs[keep])

    def normalized(self) -> "Pmf":
        mass = self.mass
        if mass <= 0.0:
            raise ValueError("cannot normalise a pmf with zero mass")
        return Pmf(self.support, self.probs / mass)

    def min_count(self) -> int:
        trimmed = self.trimmed()
        if not trimmed.support.size:
            raise ValueError("pmf carries no mass")
        return int(trimmed.support[0])


@dataclass(frozen=True)
class OutcomeSplit:
    """Terminal probabilities of a word walk: where the mass ends up."""

    correct: float
    error: float
    failure: float

    @property
    def total(self) -> float:
        return self.correct + self.error + self.failure

    def as_dict(self) -> dict[str, float]:
        return {
            OUTCOME_ERROR: self.error,
            OUTCOME_CORRECT: self.correct,
            OUTCOME_FAILURE: self.failure,
        }


@dataclass(frozen=True)
class CountMoments:
    """Exact first and second moments of a count, overall and per terminal."""

    outcome_mass: dict[str, float]
    outcome_mean: dict[str, float]
    outcome_std: dict[str, float]
    mean: float
    std: float


def _transition_matrix(chain: ScanChain) -> sparse.csr_matrix:
    """Row-stochastic transition matrix including terminal self-loops."""
    src, dst, prob, _ = chain.edge_arrays
    n = chain.n_states
    loops = np.array([i - 1 for i in chain.terminal_indices], dtype=np.int64)
    rows = np.concatenate([src, loops])
    cols = np.concatenate([dst, loops])
    data = np.concatenate([prob, np.ones(loops.size)])
    return sparse.csr_matrix((data, (rows, cols)), shape=(n, n))


def occupancy(chain: ScanChain) -> np.ndarray:
    """State occupancy over time: array of shape ``(horizon + 1, n_states)``.

    Row ``t`` is the distribution after ``t`` hops from the initial state.
    In the final row every walk that is still live has been folded into the
    failure terminal — continuing would exceed the chain's scan budget.
    """
    transpose = _transition_matrix(chain).T.tocsr()
    steps = chain.horizon
    alpha = np.zeros((steps + 1, chain.n_states))
    alpha[0, 0] = 1.0
    for t in range(1, steps + 1):
        alpha[t] = transpose @ alpha[t - 1]
    live = slice(0, chain.n_live)
    alpha[steps, chain.failure_index - 1] += alpha[steps, live].sum()
    alpha[steps, live] = 0.0
    return alpha


def outcome_probabilities(chain: ScanChain) -> OutcomeSplit:
    """Probability of each terminal outcome, horizon cut-off included."""
    moments = count_moments(chain, counts="scans")
    return OutcomeSplit(
        correct=moments.outcome_mass[OUTCOME_CORRECT],
        error=moments.outcome_mass[OUTCOME_ERROR],
        failure=moments.outcome_mass[OUTCOME_FAILURE],
    )


def _edge_counts(chain: ScanChain, counts: str) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, int]:
    """Edges plus the integer cost each edge adds to the running count."""
    src, dst, prob, is_click = chain.edge_arrays
    if counts == "scans":
        weights = chain.scan_weights[dst]
        start = chain.scan_weights[0]
    elif counts == "time":
        weights = chain.time_weights[dst]
        start = chain.time_weights[0]
    elif counts == "clicks":
        weights = np.where(is_click, 1.0, 0.0)
        start = 0.0
    else:
        raise ValueError(
            f"unknown count kind {counts!r}; expected 'scans', 'time', or 'clicks'"
        )
    int_weights = np.rint(weights).astype(np.int64)
    if not np.allclose(weights, int_weights):
        raise ValueError("count weights must be integers")
    return src, dst, prob, int_weights, int(round(start))


def count_moments(chain: ScanChain, counts: str = "scans") -> CountMoments:
    """Exact mean and standard deviation of a count, without building the pmf.

    Runs three coupled recursions per state — raw mass, first moment, and
    second moment of the accumulated count — which cost one sparse
    matrix-vector product each per hop.
    """
    src, dst, prob, weights, start = _edge_counts(chain, counts)
    n = chain.n_states
    shape = (n, n)
    p_mat = sparse.csr_matrix((prob, (dst, src)), shape=shape)
    pw_mat = sparse.csr_matrix((prob * weights, (dst, src)), shape=shape)
    pw2_mat = sparse.csr_matrix((prob * weights * weights, (dst, src)), shape=shape)

    m0 = np.zeros(n)
    m1 = np.zeros(n)
    m2 = np.zeros(n)
    m0[0] = 1.0
    m1[0] = float(start)
    m2[0] = float(start) ** 2

    terminal = np.array([i - 1 for i in chain.terminal_indices], dtype=np.int64)
    # Absorbed mass stays put with no further cost, so the terminal columns
    # are accumulated outside the hop product instead of via self-loops.
    t0 = np.zeros(3)
    t1 = np.zeros(3)
    t2 = np.zeros(3)
    for _ in range(chain.horizon):
        t0 += m0[terminal]
        t1 += m1[terminal]
        t2 += m2[terminal]
        m0[terminal] = 0.0
        m1[terminal] = 0.0
        m2[terminal] = 0.0
        next_m2 = pw2_mat @ m0 + 2.0 * (pw_mat @ m1) + p_mat @ m2
        next_m1 = pw_mat @ m0 + p_mat @ m1
        m0 = p_mat @ m0
        m1 = next_m1
        m2 = next_m2
    # Horizon cut-off: live mass fails carrying the count it accrued.
    live = slice(0, chain.n_live)
    fail = 2  # position of the failure terminal in ``terminal``
    t0[fail] += m0[terminal[fail]] + m0[live].sum()
    t1[fail] += m1[terminal[fail]] + m1[live].sum()
    t2[fail] += m2[terminal[fail]] + m2[live].sum()
    for pos in (0, 1):
        t0[pos] += m0[terminal[pos]]
        t1[pos] += m1[terminal[pos]]
        t2[pos] += m2[terminal[pos]]

    labels = (OUTCOME_ERROR, OUTCOME_CORRECT, OUTCOME_FAILURE)
    mass = {label: float(t0[i]) for i, label in enumerate(labels)}
    mean = {}
    std = {}
    for i, label in enumerate(labels):
        if t0[i] > 0.0:
            mu = t1[i] / t0[i]
            var = max(t2[i] / t0[i] - mu * mu, 0.0)
            mean[label] = float(mu)
            std[label] = float(math.sqrt(var))
        else:
            mean[label] = math.nan
            std[label] = math.nan
    total_mass = float(t0.sum())
    grand_mean = float(t1.sum() / total_mass)
    grand_var = max(float(t2.sum() / total_mass) - grand_mean**2, 0.0)
    return CountMoments(
        outcome_mass=mass,
        outcome_mean=mean,
        outcome_std=std,
        mean=grand_mean,
        std=math.sqrt(grand_var),
    )


def _choose_cap(chain: ScanChain, counts: str, cap: Union[int, None]) -> int:
    if cap is not None:
        if cap < 1:
            raise ValueError("cap must be a positive count")
        return int(cap)
    _, _, _, weights, start = _edge_counts(chain, counts)
    hard_max = start + int(weights.max(initial=0)) * chain.horizon
    if hard_max <= _EXACT_CAP_LIMIT:
        return hard_max
    moments = count_moments(chain, counts)
    return min(hard_max, int(math.ceil(moments.mean + 12.0 * moments.std)) + 4)


def counts_pmf(
    chain: ScanChain,
    counts: str = "scans",
    outcome: Union[str, None] = None,
    cap: Union[int, None] = None,
    normalize: bool = False,
) -> Pmf:
    """Exact distribution of an accumulated count over whole word walks.

    ``outcome`` restricts the pmf to walks ending in one terminal (keeping
    their raw mass unless ``normalize`` is set); ``None`` pools all walks.
    ``cap`` bounds the tracked count range — by default it is sized from the
    exact moments so that at most ``1e-10`` of mass would ever be clipped,
    and the computation refuses to continue silently past that.
    """
    if outcome is not None and outcome not in OUTCOMES:
        raise ValueError(f"unknown outcome {outcome!r}")
    src, dst, prob, weights, start = _edge_counts(chain, counts)
    limit = _choose_cap(chain, counts, cap)
    if start > limit:
        raise ValueError("cap is smaller than the initial count")

    n = chain.n_states
    table = np.zeros((limit + 1, n))
    table[start, 0] = 1.0
    # Walks whose count has already passed the cap: their exact count no
    # longer matters, only where they end up, so they evolve as a plain
    # state distribution on the side.
    spilled = np.zeros(n)

    by_weight = []
    for w in np.unique(weights):
        mask = weights == w
        mat = sparse.csr_matrix((prob[mask], (src[mask], dst[mask])), shape=(n, n))
        by_weight.append((int(w), mat))
    all_edges = sparse.csr_matrix((prob, (src, dst)), shape=(n, n))

    terminal = np.array([i - 1 for i in chain.terminal_indices], dtype=np.int64)
    absorbed = np.zeros((limit + 1, 3))
    spill_absorbed = np.zeros(3)

    for _ in range(chain.horizon):
        absorbed += table[:, terminal]
        spill_absorbed += spilled[terminal]
        table[:, terminal] = 0.0
        spilled[terminal] = 0.0
        new = np.zeros_like(table)
        new_spilled = spilled @ all_edges
        for w, mat in by_weight:
            if w == 0:
                new += table @ mat
            else:
                new[w:] += table[:-w] @ mat
                new_spilled += table[max(limit - w + 1, 0) :].sum(axis=0) @ mat
        table = new
        spilled = new_spilled
    live = slice(0, chain.n_live)
    absorbed += table[:, terminal]
    absorbed[:, 2] += table[:, live].sum(axis=1)
    spill_absorbed += spilled[terminal]
    spill_absorbed[2] += spilled[live].sum()

    overflow = spill_absorbed.sum()
    total = absorbed.sum() + overflow
    if abs(total - 1.0) > 1e-9:
        raise ArithmeticError(f"count DP lost probability mass (total {total!r})")
    if cap is None and overflow > _OVERFLOW_TOL:
        raise ArithmeticError(
            "count distribution leaks past the automatic cap; pass an explicit cap"
        )
    # What spilled is known only to exceed the cap, so it joins the top bin,
    # making that bin read "at least the cap".
    absorbed[limit] += spill_absorbed

    if outcome is None:
        column = absorbed.sum(axis=1)
    else:
        column = absorbed[:, {OUTCOME_ERROR: 0, OUTCOME_CORRECT: 1, OUTCOME_FAILURE: 2}[outcome]]
    pmf = Pmf(np.arange(limit + 1), column).trimmed(0.0)
    return pmf.normalized() if normalize else pmf


def scans_pmf(
    chain: ScanChain,
    outcome: Union[str, None] = None,
    cap: Union[int, None] = None,
    normalize: bool = False,
) -> Pmf:
    """Distribution of the number of scan events spent on the word.

    Every highlighted cell counts once, and the first cell of each group
    counts twice (its audible tick is a scan of its own).  The count is the
    same in both scanning modes; for wall-clock durations use
    :func:`time_pmf`, which weighs each scan by its dwell.
    """
    return counts_pmf(chain, "scans", outcome=outcome, cap=cap, normalize=normalize)


def time_pmf(
    chain: ScanChain,
    outcome: Union[str, None] = None,
    cap: Union[int, None] = None,
    normalize: bool = False,
) -> Pmf:
    """Distribution of the word's duration, in units of the per-cell delay.

    Multiply the support by the standard delay (slow mode) or the reduced
    delay (fast mode) for seconds.  Slow chains make this identical to
    :func:`scans_pmf`; fast chains pay the full standard hold on the final
    cell of each group, so group-final entries weigh ``k_delta`` units.
    """
    return counts_pmf(chain, "time", outcome=outcome, cap=cap, normalize=normalize)


def clicks_pmf(
    chain: ScanChain,
    outcome: Union[str, None] = None,
    cap: Union[int, None] = None,
    normalize: bool = False,
) -> Pmf:
    """Distribution of the number of registered switch activations."""
    return counts_pmf(chain, "clicks", outcome=outcome, cap=cap, normalize=normalize)


def errors_pmf(chain: ScanChain) -> Pmf:
    """Distribution of the number of wrong characters in the final text.

    A walk that ends in the correct terminal leaves zero errors.  A walk cut
    short — wrong terminator, spurious-letter overflow, or scan budget
    exhausted — is charged one error per missing letter of the word plus one
    per extraneous letter left standing, so the support runs from 0 to the
    word length plus the spurious-letter allowance.
    """
    word_len = len(chain.word)
    allowance = chain.params.error_limit
    k_max = word_len + allowance
    src, dst, prob, is_click = chain.edge_arrays

    # Click edges into the error/failure terminals leave the text with the
    # source state's letters plus the just-clicked extraneous symbol.
    bad = np.array([chain.error_index - 1, chain.failure_index - 1], dtype=np.int64)
    into_bad = is_click & np.isin(dst, bad)
    rows = []
    cols = []
    vals = []
    for edge in np.nonzero(into_bad)[0]:
        state = chain.states[src[edge]]
        k = word_len - state.m + state.e + 1
        rows.append(k)
        cols.append(src[edge])
        vals.append(prob[edge])
    collector = sparse.csr_matrix(
        (vals, (rows, cols)), shape=(k_max + 1, chain.n_states)
    )

    transpose = _transition_matrix(chain).T.tocsr()
    alpha = np.zeros(chain.n_states)
    alpha[0] = 1.0
    tally = np.zeros(k_max + 1)
    for _ in range(chain.horizon):
        tally += collector @ alpha
        alpha = transpose @ alpha
    # Walks still live at the horizon keep their current text as-is.
    for i in range(chain.n_live):
        state = chain.states[i]
        tally[word_len - state.m + state.e] += alpha[i]
    tally[0] += alpha[chain.correct_index - 1]

    total = tally.sum()
    if abs(total - 1.0) > 1e-9:
        raise ArithmeticError(f"error DP lost probability mass (total {total!r})")
    return Pmf(np.arange(k_max + 1), tally).trimmed(0.0)


def min_support(chain: ScanChain, counts: str = "scans", outcome: str = OUTCOME_CORRECT) -> int:
    """Smallest count reachable with positive probability for an outcome.

    Plain shortest-path search over the chain with each edge costing the
    count it adds; zero-cost edges (terminal entries, and misses when
    counting clicks) are legal, so the search is done directly rather than
    through a sparse-matrix graph routine that would drop stored zeros.
    """
    if outcome not in OUTCOMES:
        raise ValueError(f"unknown outcome {outcome!r}")
    src, dst, prob, weights, start = _edge_counts(chain, counts)
    adjacency: list[list[tuple[int, int]]] = [[] for _ in range(chain.n_states)]
    for a, b, p, w in zip(src, dst, prob, weights):
        if p > 0.0:
            adjacency[a].append((int(b), int(w)))

    target = {OUTCOME_ERROR: chain.error_index, OUTCOME_CORRECT: chain.correct_index, OUTCOME_FAILURE: chain.failure_index}[outcome] - 1
    best = np.full(chain.n_states, np.inf)
    best[0] = float(start)
    queue = [(float(start), 0)]
    while queue:
        cost, node = heapq.heappop(queue)
        if node == target:
            return int(cost)
        if cost > best[node]:
            continue
        for nxt, w in adjacency[node]:
            candidate = cost + w
            if candidate < best[nxt]:
                best[nxt] = candidate
                heapq.heappush(queue, (candidate, nxt))
    raise ValueError(f"outcome {outcome!r} is unreachable")


def summarize(
    scans: Pmf,
    time: Pmf,
    clicks: Pmf,
    errors: Pmf,
    unit_delay: float,
    chars: int,
) -> dict[str, float]:
    """Reduce the word distributions to headline text-entry metrics.

    ``scans`` counts scan events, ``time`` measures duration in per-cell
    delay units (identical for slow chains), ``unit_delay`` is that unit in
    seconds (the standard dwell for slow chains, the reduced dwell for fast
    chains), and ``chars`` is the number of characters the word contributes,
    terminator included.  Words per minute uses the standard
    five-characters-per-word convention.
    """
    if unit_delay <= 0.0:
        raise ValueError("unit_delay must be positive")
    if chars <= 0:
        raise ValueError("chars must be positive")
    seconds = time.mean() * unit_delay
    out = {
        "scans_mean": scans.mean(),
        "scans_std": scans.std(),
        "seconds_mean": seconds,
        "clicks_mean": clicks.mean(),
        "errors_mean": errors.mean(),
        "clicks_per_char": clicks.mean() / chars,
        "char_error_rate": errors.mean() / chars,
    }
    if seconds > 0.0:
        out["wpm"] = (chars / 5.0) / (seconds / 60.0)
    return out
