"""Tests for the click-timing and switch-noise model."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scansim.noise import (
    WAIT,
    CellWindow,
    ClickTiming,
    NoiseParams,
    SwitchNoise,
    cell_mean,
    click_prob,
    make_rng,
    miss_prob,
    overlap_prob,
    sample_events,
    scan_windows,
)


def unit_windows(n=4, step=1.0, final_hold=None):
    return scan_windows(n, step, final_hold)


# ---------------------------------------------------------------------------
# construction and validation


def test_click_timing_rejects_bad_parameters():
    with pytest.raises(ValueError):
        ClickTiming(delta=-0.1)
    with pytest.raises(ValueError):
        ClickTiming(sigma=0.0)
    with pytest.raises(ValueError):
        ClickTiming(density=lambda t: 1.0)  # missing support
    with pytest.raises(ValueError):
        # integrates to 2 over its support
        ClickTiming(density=lambda t: 2.0, support=(0.0, 1.0))


def test_custom_density_accepted_when_normalised():
    timing = ClickTiming(density=lambda t: 1.0, support=(-0.5, 0.5))
    assert timing.support == (-0.5, 0.5)


def test_switch_noise_rejects_bad_parameters():
    with pytest.raises(ValueError):
        SwitchNoise(f=-0.01)
    with pytest.raises(ValueError):
        SwitchNoise(f=1.01)
    with pytest.raises(ValueError):
        SwitchNoise(lam=-1.0)


def test_noise_params_rejects_bad_parameters():
    with pytest.raises(ValueError):
        NoiseParams(t_scan=0.0)
    with pytest.raises(ValueError):
        NoiseParams(undo_window=0)
    with pytest.raises(ValueError):
        NoiseParams(error_limit=0)
    with pytest.raises(ValueError):
        NoiseParams(kappa=0.5)


def test_cell_window_validation_and_end():
    with pytest.raises(ValueError):
        CellWindow(start=-1.0, duration=1.0)
    with pytest.raises(ValueError):
        CellWindow(start=0.0, duration=0.0)
    assert CellWindow(start=1.0, duration=0.5).end == 1.5


def test_scan_windows_layout():
    windows = scan_windows(3, 0.5, final_hold=2.0)
    assert [(w.start, w.duration) for w in windows] == [(0.5, 0.5), (1.0, 0.5), (1.5, 2.0)]
    with pytest.raises(ValueError):
        scan_windows(0, 1.0)
    with pytest.raises(ValueError):
        scan_windows(2, -1.0)


# ---------------------------------------------------------------------------
# cell_mean


def test_cell_mean_matches_window_centres():
    windows = unit_windows(4, 1.0)
    # window of cell 1 is [1, 2): centre 1.5
    assert cell_mean(1, windows, 0.0) == pytest.approx(1.5, abs=1e-12)
    assert cell_mean(2, windows, 0.0) == pytest.approx(2.5, abs=1e-12)
    assert cell_mean(1, windows, 0.8) == pytest.approx(2.3, abs=1e-12)


def test_cell_mean_rejects_out_of_range_cells():
    windows = unit_windows(3)
    for v in (0, -1, 4):
        with pytest.raises(IndexError):
            cell_mean(v, windows)


def test_cell_mean_uses_each_windows_own_duration():
    windows = scan_windows(2, 0.5, final_hold=1.0)
    assert cell_mean(1, windows) == pytest.approx(0.75)
    assert cell_mean(2, windows) == pytest.approx(1.5)  # 1.0 + 0.5 * 1.0


# ---------------------------------------------------------------------------
# overlap_prob


def test_overlap_concentrates_on_intended_cell_when_sharp():
    windows = unit_windows(4)
    timing = ClickTiming(delta=0.0, sigma=1e-6)
    assert overlap_prob(2, 2, timing, windows) == pytest.approx(1.0, abs=1e-9)
    assert overlap_prob(1, 2, timing, windows) == pytest.approx(0.0, abs=1e-9)
    assert overlap_prob(3, 2, timing, windows) == pytest.approx(0.0, abs=1e-9)


def test_overlap_closed_form_oracle():
    # window [1, 2), aim centre 1.5, sigma 0.25: q = Phi(2) - Phi(-2)
    windows = unit_windows(3)
    timing = ClickTiming(delta=0.0, sigma=0.25)
    from scipy.special import ndtr

    expected = float(ndtr(2.0) - ndtr(-2.0))
    assert overlap_prob(1, 1, timing, windows) == pytest.approx(expected, rel=1e-12)


def test_overlap_latency_shifts_the_mean_into_the_next_window():
    windows = unit_windows(4)
    timing = ClickTiming(delta=1.0, sigma=0.05)
    # aiming at cell 1 with a one-window latency lands in cell 2's window
    assert overlap_prob(2, 1, timing, windows) == pytest.approx(1.0, abs=1e-6)
    assert overlap_prob(1, 1, timing, windows) == pytest.approx(0.0, abs=1e-6)


def test_overlap_quadrature_agrees_with_closed_form_on_random_triples():
    rng = np.random.default_rng(1234)
    for _ in range(100):
        n = int(rng.integers(2, 7))
        step = float(rng.uniform(0.2, 2.0))
        hold = float(rng.uniform(step, 3.0 * step))
        windows = scan_windows(n, step, final_hold=hold)
        timing = ClickTiming(delta=float(rng.uniform(0.0, step)), sigma=float(rng.uniform(0.02, step)))
        v_scan = int(rng.integers(1, n + 1))
        v_aim = int(rng.integers(1, n + 1))
        closed = overlap_prob(v_scan, v_aim, timing, windows, method="closed_form")
        numeric = overlap_prob(v_scan, v_aim, timing, windows, method="quadrature")
        assert abs(closed - numeric) < 1e-8


def test_overlap_with_custom_uniform_density():
    # offset uniform on [-0.5, 0.5) around the aim centre: the whole mass
    # stays inside the aimed cell's unit window
    windows = unit_windows(3)
    timing = ClickTiming(density=lambda t: 1.0 if -0.5 <= t <= 0.5 else 0.0, support=(-0.5, 0.5))
    assert overlap_prob(2, 2, timing, windows) == pytest.approx(1.0, abs=1e-8)
    assert overlap_prob(1, 2, timing, windows) == pytest.approx(0.0, abs=1e-8)


def test_overlap_rejects_closed_form_for_custom_density():
    windows = unit_windows(2)
    timing = ClickTiming(density=lambda t: 1.0 if 0 <= t <= 1 else 0.0, support=(0.0, 1.0))
    with pytest.raises(ValueError):
        overlap_prob(1, 1, timing, windows, method="closed_form")


def test_overlap_reports_bad_density_values():
    windows = unit_windows(2)
    timing = ClickTiming(density=lambda t: 1.0 if 0 <= t <= 1 else 0.0, support=(0.0, 1.0))
    bad = ClickTiming.__new__(ClickTiming)  # bypass normalisation check
    object.__setattr__(bad, "delta", 0.0)
    object.__setattr__(bad, "sigma", 0.05)
    object.__setattr__(bad, "density", lambda t: float("nan"))
    object.__setattr__(bad, "support", (-0.5, 0.5))
    with pytest.raises(ArithmeticError, match="t="):
        overlap_prob(1, 1, bad, windows)
    assert timing is not bad


@settings(max_examples=60, deadline=None)
@given(
    sigma=st.floats(0.02, 2.0),
    delta=st.floats(0.0, 2.0),
    step=st.floats(0.2, 2.0),
    n=st.integers(2, 6),
    v_aim=st.integers(1, 6),
)
def test_overlap_masses_over_one_group_stay_below_one(sigma, delta, step, n, v_aim):
    v_aim = min(v_aim, n)
    windows = scan_windows(n, step)
    timing = ClickTiming(delta=delta, sigma=sigma)
    qs = [overlap_prob(v, v_aim, timing, windows) for v in range(1, n + 1)]
    assert all(0.0 <= q <= 1.0 for q in qs)
    assert sum(qs) <= 1.0 + 1e-12


# ---------------------------------------------------------------------------
# miss_prob / click_prob


def test_miss_prob_oracle_with_full_overlap():
    # sharp timing makes q(aim, aim) ~ 1, so the miss probability reduces to
    # exp(-lam * duration) * f = exp(-0.01) * 0.1
    windows = unit_windows(3)
    params = NoiseParams(
        click_timing=ClickTiming(delta=0.0, sigma=1e-9),
        switch_noise=SwitchNoise(f=0.1, lam=0.01),
    )
    expected = math.exp(-0.01) * 0.1
    assert miss_prob(2, 2, params, windows) == pytest.approx(expected, rel=1e-9)
    assert click_prob(2, 2, params, windows) == pytest.approx(1.0 - expected, rel=1e-9)


def test_miss_prob_when_waiting_depends_only_on_false_positives():
    windows = unit_windows(3)
    params = NoiseParams(switch_noise=SwitchNoise(f=0.3, lam=0.25))
    assert miss_prob(1, WAIT, params, windows) == pytest.approx(math.exp(-0.25), rel=1e-12)


def test_miss_prob_with_fully_unreliable_switch():
    windows = unit_windows(3)
    params = NoiseParams(
        click_timing=ClickTiming(sigma=1e-6),
        switch_noise=SwitchNoise(f=1.0, lam=0.0),
    )
    assert miss_prob(2, 2, params, windows) == pytest.approx(1.0, abs=1e-15)


def test_click_and_miss_are_exact_complements():
    windows = unit_windows(4)
    params = NoiseParams(
        click_timing=ClickTiming(delta=0.2, sigma=0.3),
        switch_noise=SwitchNoise(f=0.15, lam=0.05),
    )
    for v_scan in range(1, 5):
        for v_aim in [1, 2, 3, 4, WAIT]:
            total = miss_prob(v_scan, v_aim, params, windows) + click_prob(v_scan, v_aim, params, windows)
            assert total == 1.0


@settings(max_examples=60, deadline=None)
@given(
    lam_low=st.floats(0.0, 1.0),
    lam_extra=st.floats(0.0, 2.0),
    f_low=st.floats(0.0, 1.0),
    f_extra=st.floats(0.0, 1.0),
    sigma=st.floats(0.05, 1.0),
)
def test_miss_prob_monotone_in_noise_rates(lam_low, lam_extra, f_low, f_extra, sigma):
    windows = unit_windows(3)
    f_high = min(1.0, f_low + f_extra)
    low = NoiseParams(
        click_timing=ClickTiming(sigma=sigma),
        switch_noise=SwitchNoise(f=f_low, lam=lam_low),
    )
    more_fp = NoiseParams(
        click_timing=ClickTiming(sigma=sigma),
        switch_noise=SwitchNoise(f=f_low, lam=lam_low + lam_extra),
    )
    more_fn = NoiseParams(
        click_timing=ClickTiming(sigma=sigma),
        switch_noise=SwitchNoise(f=f_high, lam=lam_low),
    )
    base = miss_prob(2, 2, low, windows)
    assert miss_prob(2, 2, more_fp, windows) <= base + 1e-15
    assert miss_prob(2, 2, more_fn, windows) >= base - 1e-15


# ---------------------------------------------------------------------------
# sample_events


def test_sample_events_deterministic_for_a_seed():
    windows = unit_windows(4)
    params = NoiseParams(
        click_timing=ClickTiming(delta=0.1, sigma=0.2),
        switch_noise=SwitchNoise(f=0.2, lam=0.5),
    )
    a = sample_events(2, params, windows, rng=99)
    b = sample_events(2, params, windows, rng=99)
    assert a == b


def test_sample_events_noiseless_emits_exactly_one_click_per_group():
    windows = unit_windows(4)
    params = NoiseParams(
        click_timing=ClickTiming(delta=0.0, sigma=1e-6),
        switch_noise=SwitchNoise(f=0.0, lam=0.0),
    )
    rng = make_rng(7)
    for _ in range(200):
        events = sample_events(3, params, windows, rng)
        assert len(events) == 1
        w = windows[2]
        assert w.start <= events[0] < w.end


def test_sample_events_empty_when_switch_never_fires():
    windows = unit_windows(4)
    params = NoiseParams(switch_noise=SwitchNoise(f=1.0, lam=0.0))
    rng = make_rng(3)
    for _ in range(100):
        assert sample_events(2, params, windows, rng) == []
        assert sample_events(WAIT, params, windows, rng) == []


def test_sample_events_true_click_mean_matches_cell_mean():
    windows = unit_windows(4)
    params = NoiseParams(
        click_timing=ClickTiming(delta=0.3, sigma=0.1),
        switch_noise=SwitchNoise(f=0.0, lam=0.0),
    )
    rng = make_rng(2024)
    n = 100_000
    times = np.empty(n)
    for i in range(n):
        times[i] = sample_events(2, params, windows, rng)[0]
    expected = cell_mean(2, windows, 0.3)
    se = 0.1 / math.sqrt(n)
    assert abs(times.mean() - expected) < 3.0 * se


def test_sample_events_false_positive_count_matches_poisson_rate():
    # rate 2/s over a 10-second group span: mean count 20
    windows = scan_windows(9, 1.0)  # last window ends at 10.0
    assert windows[-1].end == 10.0
    params = NoiseParams(switch_noise=SwitchNoise(f=1.0, lam=2.0))
    rng = make_rng(5150)
    n = 100_000
    counts = np.empty(n)
    for i in range(n):
        counts[i] = len(sample_events(WAIT, params, windows, rng))
    se = math.sqrt(20.0 / n)
    assert abs(counts.mean() - 20.0) < 3.0 * se
    assert counts.min() >= 0


def test_sample_events_sorted_and_within_span():
    windows = unit_windows(4)
    params = NoiseParams(
        click_timing=ClickTiming(delta=0.1, sigma=0.3),
        switch_noise=SwitchNoise(f=0.1, lam=1.5),
    )
    rng = make_rng(11)
    span = windows[-1].end
    for _ in range(300):
        events = sample_events(1, params, windows, rng)
        assert events == sorted(events)
        # false positives stay inside the group span; the true click may
        # stray slightly outside via its Gaussian tail
        fp_like = [t for t in events if 0.0 <= t <= span]
        assert len(events) - len(fp_like) <= 1


def test_sample_events_custom_density_stays_in_support():
    windows = unit_windows(4)
    timing = ClickTiming(
        delta=0.0,
        density=lambda t: 2.0 if -0.25 <= t <= 0.25 else 0.0,
        support=(-0.25, 0.25),
    )
    params = NoiseParams(click_timing=timing, switch_noise=SwitchNoise(f=0.0, lam=0.0))
    rng = make_rng(8)
    centre = cell_mean(2, windows)
    for _ in range(500):
        (t,) = sample_events(2, params, windows, rng)
        assert centre - 0.2501 <= t <= centre + 0.2501
