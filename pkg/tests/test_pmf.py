"""Tests for the exact count-distribution machinery."""

import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scansim.chain import build_fast, build_slow
from scansim.layout import FastParams, builtin_layout, min_scans, min_time_units
from scansim.noise import ClickTiming, NoiseParams, SwitchNoise
from scansim.pmf import (
    Pmf,
    clicks_pmf,
    count_moments,
    counts_pmf,
    errors_pmf,
    min_support,
    occupancy,
    outcome_probabilities,
    scans_pmf,
    summarize,
    time_pmf,
)


@pytest.fixture
def grid2x2():
    return builtin_layout("grid2x2")


@pytest.fixture
def grid_alpha():
    return builtin_layout("grid_alpha")


def params_with(delta=0.1, sigma=0.1, f=0.1, lam=0.01, t_scan=1.0, u=2, e=2, kappa=10.0):
    return NoiseParams(
        click_timing=ClickTiming(delta=delta, sigma=sigma),
        switch_noise=SwitchNoise(f=f, lam=lam),
        t_scan=t_scan,
        undo_window=u,
        error_limit=e,
        kappa=kappa,
    )


def noiseless():
    return params_with(delta=0.0, sigma=1e-9, f=0.0, lam=0.0)


def drop_only(f):
    """Only dropped clicks: razor-sharp timing, no false positives."""
    return params_with(delta=0.0, sigma=1e-9, f=f, lam=0.0)


# ---------------------------------------------------------------------------
# Pmf container


def test_pmf_basic_statistics():
    pmf = Pmf(np.array([2, 5]), np.array([0.25, 0.75]))
    assert pmf.mass == pytest.approx(1.0)
    assert pmf.mean() == pytest.approx(4.25)
    assert pmf.var() == pytest.approx(0.25 * 0.75 * 9.0)
    assert pmf.p(5) == 0.75
    assert pmf.p(3) == 0.0
    assert pmf.min_count() == 2


def test_pmf_validation():
    with pytest.raises(ValueError):
        Pmf(np.array([3, 2]), np.array([0.5, 0.5]))
    with pytest.raises(ValueError):
        Pmf(np.array([1, 2]), np.array([0.5, -0.5]))
    with pytest.raises(ValueError):
        Pmf(np.array([1, 2]), np.array([0.5]))


def test_pmf_trim_and_normalize():
    pmf = Pmf(np.array([1, 2, 3]), np.array([0.2, 1e-18, 0.2]))
    trimmed = pmf.trimmed()
    assert trimmed.support.tolist() == [1, 3]
    renorm = trimmed.normalized()
    assert renorm.mass == pytest.approx(1.0)
    assert renorm.p(1) == pytest.approx(0.5)


# ---------------------------------------------------------------------------
# noiseless degeneration: every distribution collapses to the cheapest walk


def test_noiseless_slow_word_is_a_point_mass(grid2x2):
    chain = build_slow("a_", grid2x2, noiseless())
    scans = scans_pmf(chain).trimmed(1e-9)
    clicks = clicks_pmf(chain).trimmed(1e-9)
    errors = errors_pmf(chain).trimmed(1e-9)
    assert scans.support.tolist() == [9]
    assert scans.p(9) == pytest.approx(1.0)
    assert clicks.support.tolist() == [4]
    assert errors.support.tolist() == [0]
    split = outcome_probabilities(chain)
    assert split.correct == pytest.approx(1.0)


def test_noiseless_fast_word_is_a_point_mass(grid2x2):
    chain = build_fast("a_", grid2x2, FastParams(base=noiseless(), t_fast=0.5))
    assert chain.k_delta == 2
    # Twelve scan events: four group scans, each a tick-doubled first cell
    # plus a final cell (four slow-held scans, eight fast ones).
    scans = scans_pmf(chain).trimmed(1e-9)
    assert scans.support.tolist() == [12]
    # Duration: the four held finals pay k_delta = 2 fast units each, so
    # 16 fast units = 16 * 0.5s = 4*T_S + 8*T_F.
    time = time_pmf(chain).trimmed(1e-9)
    assert time.support.tolist() == [16]
    clicks = clicks_pmf(chain).trimmed(1e-9)
    assert clicks.support.tolist() == [4]


def test_noiseless_longer_word_matches_the_layout_walk(grid_alpha):
    chain = build_slow("standing_", grid_alpha, noiseless())
    scans = scans_pmf(chain).trimmed(1e-9)
    assert scans.support.tolist() == [min_scans("standing_", grid_alpha)]
    assert scans.support.tolist() == [77]


# ---------------------------------------------------------------------------
# hand-computed oracle: drop-only noise makes each selection a geometric retry


def test_drop_only_scan_distribution_head(grid2x2):
    f = 0.2
    chain = build_slow("_", grid2x2, drop_only(f))
    scans = scans_pmf(chain)
    # cheapest walk: row click, forced pass over the first column cell,
    # terminator click = 2 + 2 + 1 units
    assert scans.p(5) == pytest.approx((1 - f) ** 2, rel=1e-9)
    # one retry, in either the row cycle or the column cycle, costs 3 units
    assert scans.p(8) == pytest.approx(2 * f * (1 - f) ** 2, rel=1e-9)
    assert scans.p(6) == 0.0
    assert scans.p(7) == 0.0


def test_drop_only_click_distribution(grid2x2):
    f = 0.2
    chain = build_slow("_", grid2x2, drop_only(f))
    clicks = clicks_pmf(chain)
    # Each word walk registers one click per row selection plus the final
    # terminator click.  A row selection repeats only when both column
    # passes drop the press and the selection is undone, so completed walks
    # log 2 + k clicks with probability (f^2)^k (1 - f^2).
    for k in range(3):
        assert clicks.p(2 + k) == pytest.approx((f**2) ** k * (1 - f**2), rel=1e-6)
    # timed-out walks (fewer than two clicks) are vanishingly rare
    assert clicks.p(0) + clicks.p(1) < 1e-8
    assert clicks.mass == pytest.approx(1.0, rel=1e-12)
    assert counts_pmf(chain, "clicks", outcome="correct").min_count() == 2


def test_all_drops_times_out_with_the_word_untyped(grid2x2):
    chain = build_slow("a_", grid2x2, drop_only(1.0))
    split = outcome_probabilities(chain)
    assert split.failure == pytest.approx(1.0)
    errors = errors_pmf(chain).trimmed(1e-12)
    assert errors.support.tolist() == [2]  # both characters missing
    clicks = clicks_pmf(chain).trimmed(1e-12)
    assert clicks.support.tolist() == [0]
    scans = scans_pmf(chain).trimmed(1e-12)
    # the scan head sweeps rows forever: 80 hops alternating weight 1 and 2
    # on top of the initial 2 units
    assert scans.support.tolist() == [122]


# ---------------------------------------------------------------------------
# structural identities under general noise


def test_occupancy_rows_are_distributions(grid2x2):
    chain = build_slow("a_", grid2x2, params_with())
    alpha = occupancy(chain)
    assert alpha.shape == (81, 43)
    sums = alpha.sum(axis=1)
    assert np.allclose(sums, 1.0, atol=1e-12)
    live_mass_at_end = alpha[-1, : chain.n_live].sum()
    assert live_mass_at_end == 0.0
    assert alpha[0, 0] == 1.0


def test_unit_weight_scan_counts_match_absorption_times(grid2x2):
    """With every live state costing one unit, the scan count is the hop at
    which the walk absorbed — which the occupancy table states directly."""
    chain = build_slow("a_", grid2x2, params_with())
    flat = np.zeros_like(chain.scan_weights)
    flat[: chain.n_live] = 1.0
    unit_chain = dataclasses.replace(chain, scan_weights=flat)
    pmf = counts_pmf(unit_chain, "scans", outcome="correct")

    alpha = occupancy(chain)
    correct = alpha[:, chain.correct_index - 1]
    arrivals = np.diff(correct)
    for k, p in zip(pmf.support, pmf.probs):
        assert p == pytest.approx(arrivals[k - 1], abs=1e-12)
    assert pmf.mass == pytest.approx(correct[-1], rel=1e-12)


def test_outcome_masses_agree_across_methods(grid2x2):
    chain = build_slow("a_", grid2x2, params_with())
    split = outcome_probabilities(chain)
    alpha_last = occupancy(chain)[-1]
    assert split.error == pytest.approx(alpha_last[chain.error_index - 1], rel=1e-12)
    assert split.correct == pytest.approx(alpha_last[chain.correct_index - 1], rel=1e-12)
    assert split.failure == pytest.approx(alpha_last[chain.failure_index - 1], rel=1e-12)
    assert split.total == pytest.approx(1.0, rel=1e-12)


def test_no_error_text_exactly_when_the_walk_completes(grid2x2, grid_alpha):
    for layout, word in [(grid2x2, "a_"), (grid_alpha, "sat_")]:
        chain = build_slow(word, layout, params_with(f=0.3, lam=0.05))
        errors = errors_pmf(chain)
        split = outcome_probabilities(chain)
        assert errors.p(0) == pytest.approx(split.correct, rel=1e-12)
        assert errors.mass == pytest.approx(1.0, rel=1e-12)
        allowance = chain.params.error_limit
        assert errors.support.max() <= len(word) + allowance


@settings(max_examples=15, deadline=None)
@given(
    word=st.sampled_from(["a_", "at_", "ta_"]),
    delta=st.floats(0.0, 1.0),
    sigma=st.floats(0.05, 0.8),
    f=st.floats(0.0, 0.8),
    lam=st.floats(0.0, 0.3),
)
def test_moment_recursion_matches_the_full_distribution(word, delta, sigma, f, lam):
    chain = build_slow(word, builtin_layout("grid2x2"), params_with(delta=delta, sigma=sigma, f=f, lam=lam))
    for counts in ("scans", "clicks"):
        pmf = counts_pmf(chain, counts)
        moments = count_moments(chain, counts)
        assert pmf.mass == pytest.approx(1.0, rel=1e-9)
        assert pmf.mean() == pytest.approx(moments.mean, rel=1e-9, abs=1e-12)
        assert pmf.std() == pytest.approx(moments.std, rel=1e-7, abs=1e-9)


def test_conditional_moments_match_conditional_pmfs(grid2x2):
    chain = build_slow("a_", grid2x2, params_with(f=0.25, lam=0.05))
    moments = count_moments(chain, "scans")
    for outcome in ("error", "correct", "failure"):
        pmf = counts_pmf(chain, "scans", outcome=outcome)
        assert pmf.mass == pytest.approx(moments.outcome_mass[outcome], rel=1e-10)
        if pmf.mass > 0:
            cond = pmf.normalized()
            assert cond.mean() == pytest.approx(moments.outcome_mean[outcome], rel=1e-9)
            assert cond.std() == pytest.approx(moments.outcome_std[outcome], rel=1e-7, abs=1e-9)


def test_fast_mode_moments_agree_with_the_distribution(grid2x2):
    base = params_with(delta=0.3, sigma=0.2, f=0.15, lam=0.0)
    chain = build_fast("at_", grid2x2, FastParams(base=base, t_fast=0.25))
    pmf = counts_pmf(chain, "scans")
    moments = count_moments(chain, "scans")
    assert pmf.mass == pytest.approx(1.0, rel=1e-9)
    assert pmf.mean() == pytest.approx(moments.mean, rel=1e-9)
    assert pmf.std() == pytest.approx(moments.std, rel=1e-7)


# ---------------------------------------------------------------------------
# cheapest-walk search


def test_min_support_matches_layout_arithmetic(grid2x2, grid_alpha):
    chain = build_slow("a_", grid2x2, params_with())
    assert min_support(chain, "scans") == 9
    assert min_support(chain, "clicks") == 4
    big = build_slow("standing_", grid_alpha, params_with())
    assert min_support(big, "scans") == min_scans("standing_", grid_alpha) == 77
    assert min_support(big, "clicks") == 2 * len("standing_")


def test_min_support_fast(grid2x2):
    base = params_with(f=0.1, lam=0.0)
    chain = build_fast("a_", grid2x2, FastParams(base=base, t_fast=0.5))
    assert min_support(chain, "scans") == min_scans("a_", grid2x2, mode="fast") == 12
    assert min_support(chain, "time") == min_time_units("a_", grid2x2, "fast", k_delta=2) == 16


def test_min_support_of_the_error_terminal(grid2x2):
    chain = build_slow("a_", grid2x2, params_with())
    # fastest mistake: select the letter row, overshoot to the terminator
    assert min_support(chain, "clicks", outcome="error") == 2
    assert min_support(chain, "scans", outcome="error") == 5


def test_min_support_unreachable_outcome(grid2x2):
    chain = build_slow("a_", grid2x2, noiseless())
    with pytest.raises(ValueError):
        min_support(chain, "scans", outcome="error")


def test_min_support_appears_in_the_distribution(grid2x2):
    chain = build_slow("a_", grid2x2, params_with())
    pmf = counts_pmf(chain, "scans", outcome="correct")
    assert pmf.min_count() == min_support(chain, "scans")


# ---------------------------------------------------------------------------
# cap handling


def test_explicit_cap_lumps_the_tail_without_losing_mass(grid2x2):
    chain = build_slow("_", grid2x2, drop_only(0.3))
    capped = counts_pmf(chain, "scans", cap=8)
    assert capped.mass == pytest.approx(1.0, rel=1e-9)
    exact = counts_pmf(chain, "scans")
    assert capped.p(5) == pytest.approx(exact.p(5), rel=1e-12)
    tail = sum(p for k, p in zip(exact.support, exact.probs) if k >= 8)
    assert capped.p(8) == pytest.approx(tail, rel=1e-9)


def test_cap_below_initial_count_is_rejected(grid2x2):
    chain = build_slow("a_", grid2x2, params_with())
    with pytest.raises(ValueError):
        counts_pmf(chain, "scans", cap=1)


def test_unknown_count_kind_is_rejected(grid2x2):
    chain = build_slow("a_", grid2x2, params_with())
    with pytest.raises(ValueError):
        counts_pmf(chain, "steps")
    with pytest.raises(ValueError):
        counts_pmf(chain, "scans", outcome="draw")


# ---------------------------------------------------------------------------
# summary metrics


def test_summarize_noiseless_word(grid2x2):
    chain = build_slow("a_", grid2x2, noiseless())
    scans = scans_pmf(chain)
    time = time_pmf(chain)
    clicks = clicks_pmf(chain)
    errors = errors_pmf(chain)
    out = summarize(scans, time, clicks, errors, unit_delay=1.0, chars=2)
    assert out["scans_mean"] == pytest.approx(9.0, rel=1e-9)
    assert out["seconds_mean"] == pytest.approx(9.0, rel=1e-9)
    assert out["wpm"] == pytest.approx((2 / 5) / (9 / 60), rel=1e-9)
    assert out["wpm"] == pytest.approx(2.6666667, rel=1e-6)
    assert out["clicks_per_char"] == pytest.approx(2.0, rel=1e-9)
    assert out["char_error_rate"] == pytest.approx(0.0, abs=1e-9)


def test_summarize_fast_word_uses_durations_not_scan_counts(grid2x2):
    chain = build_fast("a_", grid2x2, FastParams(base=noiseless(), t_fast=0.5))
    out = summarize(
        scans_pmf(chain),
        time_pmf(chain),
        clicks_pmf(chain),
        errors_pmf(chain),
        unit_delay=0.5,
        chars=2,
    )
    assert out["scans_mean"] == pytest.approx(12.0, rel=1e-9)
    # 16 fast units of 0.5s each: 8 seconds in all, one second faster than
    # the slow mode's 9 at the same standard delay.
    assert out["seconds_mean"] == pytest.approx(8.0, rel=1e-9)
    assert out["wpm"] == pytest.approx((2 / 5) / (8 / 60), rel=1e-9)


def test_summarize_scales_with_the_unit_delay(grid2x2):
    chain = build_slow("a_", grid2x2, noiseless())
    pmfs = scans_pmf(chain), time_pmf(chain), clicks_pmf(chain), errors_pmf(chain)
    slow = summarize(*pmfs, unit_delay=2.0, chars=2)
    fast = summarize(*pmfs, unit_delay=0.5, chars=2)
    assert slow["wpm"] == pytest.approx(fast["wpm"] / 4.0, rel=1e-9)


def test_summarize_validation(grid2x2):
    chain = build_slow("a_", grid2x2, noiseless())
    pmfs = scans_pmf(chain), time_pmf(chain), clicks_pmf(chain), errors_pmf(chain)
    with pytest.raises(ValueError):
        summarize(*pmfs, unit_delay=0.0, chars=2)
    with pytest.raises(ValueError):
        summarize(*pmfs, unit_delay=1.0, chars=0)
