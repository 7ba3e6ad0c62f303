"""Tests for grid layouts, delay schedules and scan-count floors."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scansim.layout import (
    DelaySchedule,
    FastParams,
    GridLayout,
    builtin_layout,
    builtin_layout_names,
    delay_schedule,
    final_hold_units,
    layout_from_dict,
    layout_to_dict,
    load_layout,
    locate,
    min_scans,
    min_time_units,
)
from scansim.noise import NoiseParams


@pytest.fixture
def grid2x2():
    return builtin_layout("grid2x2")


@pytest.fixture
def grid_alpha():
    return builtin_layout("grid_alpha")


# ---------------------------------------------------------------------------
# construction and validation


def test_layout_shape_properties(grid2x2, grid_alpha):
    assert grid2x2.n_rows == 2
    assert grid2x2.max_row_len == 2
    assert grid2x2.n_cells_max == 2
    assert grid_alpha.n_rows == 6
    assert grid_alpha.max_row_len == 5
    assert grid_alpha.n_cells_max == 6
    assert grid_alpha.row_len(6) == 4  # ragged final row


def test_layout_rejects_duplicate_symbols():
    with pytest.raises(ValueError, match="more than once"):
        GridLayout(rows=("ab", "a←"))


def test_layout_rejects_missing_delete():
    with pytest.raises(ValueError, match="delete symbol"):
        GridLayout(rows=("ab", "c_"))


def test_layout_rejects_missing_terminator():
    with pytest.raises(ValueError, match="terminator"):
        GridLayout(rows=("ab", "c←"))


def test_layout_rejects_empty_rows():
    with pytest.raises(ValueError):
        GridLayout(rows=())
    with pytest.raises(ValueError):
        GridLayout(rows=("a_", ""))


def test_word_validation(grid2x2):
    grid2x2.validate_word("a_")
    grid2x2.validate_word("_")
    with pytest.raises(ValueError):
        grid2x2.validate_word("")
    with pytest.raises(ValueError, match="not in the layout"):
        grid2x2.validate_word("z_")
    with pytest.raises(ValueError, match="delete"):
        grid2x2.validate_word("←_")
    with pytest.raises(ValueError, match="terminator"):
        grid2x2.validate_word("at")
    with pytest.raises(ValueError, match="end of a word"):
        grid2x2.validate_word("a_t_")


# ---------------------------------------------------------------------------
# locate


def test_locate_examples(grid2x2, grid_alpha):
    assert locate("a", grid2x2) == (1, 1)
    assert locate("←", grid2x2) == (2, 2)
    assert grid_alpha.rows[1] == "efgh."
    assert locate("h", grid_alpha) == (2, 4)


def test_locate_unknown_symbol(grid2x2):
    with pytest.raises(KeyError):
        locate("z", grid2x2)


def test_locate_is_a_bijection_on_grid_cells(grid_alpha):
    seen = set()
    for r, row in enumerate(grid_alpha.rows, start=1):
        for c, symbol in enumerate(row, start=1):
            assert locate(symbol, grid_alpha) == (r, c)
            assert grid_alpha.symbol_at(r, c) == symbol
            seen.add((r, c))
    assert len(seen) == sum(len(row) for row in grid_alpha.rows)


# ---------------------------------------------------------------------------
# delay schedules


def test_slow_schedule_doubles_the_tick(grid2x2):
    params = NoiseParams(t_scan=1.0)
    schedule = delay_schedule("slow", grid2x2, params)
    assert schedule.durations == (2.0, 1.0, 1.0)
    assert schedule.total == 4.0


def test_fast_schedule_holds_the_last_cell(grid2x2):
    params = NoiseParams(t_scan=1.0)
    fast = FastParams(base=params, t_fast=0.5)
    schedule = delay_schedule("fast", grid2x2, params, fast)
    assert schedule.durations == (1.0, 0.5, 1.0)


def test_fast_schedule_with_equal_dwells_matches_slow(grid_alpha):
    params = NoiseParams(t_scan=0.7)
    fast = FastParams(base=params, t_fast=0.7)
    slow_schedule = delay_schedule("slow", grid_alpha, params)
    fast_schedule = delay_schedule("fast", grid_alpha, params, fast)
    assert fast_schedule.durations == pytest.approx(slow_schedule.durations)


def test_fast_schedule_needs_fast_params(grid2x2):
    with pytest.raises(ValueError, match="fast_params"):
        delay_schedule("fast", grid2x2, NoiseParams())


def test_schedule_validation():
    with pytest.raises(ValueError):
        DelaySchedule(durations=(1.0,))
    with pytest.raises(ValueError):
        DelaySchedule(durations=(1.0, 0.0))


def test_fast_params_validation():
    base = NoiseParams(t_scan=1.0)
    FastParams(base=base, t_fast=1.0)  # boundary allowed
    with pytest.raises(ValueError):
        FastParams(base=base, t_fast=0.0)
    with pytest.raises(ValueError):
        FastParams(base=base, t_fast=1.5)


# ---------------------------------------------------------------------------
# final hold units


def test_final_hold_units_oracle():
    assert final_hold_units(1.0, 1.0) == 1
    assert final_hold_units(1.0, 0.5) == 2
    assert final_hold_units(0.5, 0.05) == 10  # exact ratio despite float error
    assert final_hold_units(0.3, 0.1) == 3
    assert final_hold_units(1.15, 0.5) == 3  # 2.3 rounds up


# ---------------------------------------------------------------------------
# min_scans


def test_min_scans_examples(grid2x2, grid_alpha):
    assert min_scans("a_", grid2x2, "slow") == 9
    assert min_scans("a_", grid2x2, "fast") == 12
    assert min_scans("standing_", grid_alpha, "slow") == 77


def test_min_time_units_examples(grid2x2):
    # Fast mode: each full group scan of n cells lasts n + k_delta units
    # (tick included); four group scans for a two-letter word.
    assert min_time_units("a_", grid2x2, "fast", k_delta=1) == 12
    assert min_time_units("a_", grid2x2, "fast", k_delta=2) == 16
    assert min_time_units("a_", grid2x2, "fast", k_delta=5) == 28
    # Standard mode ignores k_delta: time and scan counts coincide.
    assert min_time_units("a_", grid2x2, "slow") == min_scans("a_", grid2x2, "slow")


def test_min_scans_single_terminator_word(grid2x2):
    # "_" sits at (1, 2): row pass costs 2, column pass costs 3
    assert min_scans("_", grid2x2, "slow") == 5


def test_min_scans_rejects_invalid_words(grid2x2):
    with pytest.raises(ValueError):
        min_scans("at", grid2x2)
    with pytest.raises(ValueError):
        min_scans("a_", grid2x2, mode="warp")
    with pytest.raises(ValueError):
        min_time_units("a_", grid2x2, "fast", k_delta=0)


@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_min_scans_is_additive_over_letters(data):
    layout = builtin_layout("grid_alpha")
    letters = sorted(set("".join(layout.rows)) - layout.terminators - {layout.delete_symbol})
    w1 = "".join(data.draw(st.lists(st.sampled_from(letters), min_size=0, max_size=5)))
    w2 = "".join(data.draw(st.lists(st.sampled_from(letters), min_size=0, max_size=5)))
    mode = data.draw(st.sampled_from(["slow", "fast"]))
    k = data.draw(st.integers(1, 4))
    combined = min_time_units(w1 + w2 + "_", layout, mode, k)
    split = (
        min_time_units(w1 + "_", layout, mode, k)
        + min_time_units(w2 + "_", layout, mode, k)
        - min_time_units("_", layout, mode, k)
    )
    assert combined == split
    assert min_scans(w1 + w2 + "_", layout, mode) == (
        min_scans(w1 + "_", layout, mode)
        + min_scans(w2 + "_", layout, mode)
        - min_scans("_", layout, mode)
    )


# ---------------------------------------------------------------------------
# serialisation and fixtures


def test_builtin_layout_names_include_bundled_grids():
    names = builtin_layout_names()
    assert "grid2x2" in names
    assert "grid_alpha" in names


def test_unknown_builtin_layout():
    with pytest.raises(KeyError):
        builtin_layout("no_such_layout")


def test_layout_json_round_trip(grid_alpha, tmp_path):
    data = layout_to_dict(grid_alpha)
    assert layout_from_dict(data) == grid_alpha
    path = tmp_path / "layout.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    assert load_layout(path) == grid_alpha


def test_layout_from_dict_validates_shape():
    with pytest.raises(ValueError, match="rows"):
        layout_from_dict({})
    with pytest.raises(ValueError, match="list of strings"):
        layout_from_dict({"rows": [["a", "_"]]})


def test_fixture_directory_override(tmp_path, monkeypatch):
    layout = GridLayout(rows=("ox_", "←yz"), terminators=frozenset("_"))
    (tmp_path / "tiny.json").write_text(json.dumps(layout_to_dict(layout)), encoding="utf-8")
    monkeypatch.setenv("SCANSIM_FIXTURES", str(tmp_path))
    assert builtin_layout_names() == ["tiny"]
    assert builtin_layout("tiny") == layout
    with pytest.raises(KeyError):
        builtin_layout("grid2x2")  # bundled names are hidden by the override
