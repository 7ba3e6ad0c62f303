"""Scanning keyboard layouts, highlight schedules and scan-count floors.

A layout is a grid of symbols scanned row by row; selecting a row starts a
column scan inside it.  Rows may have different lengths.  Exactly one cell
holds the delete symbol, and one or more cells hold word terminators.  The
grid is paced by a schedule of per-cell dwell times: a tick interval opens
every group scan, and in the fast mode the final cell of a group holds for
the full standard dwell so the user has time to react.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from pathlib import Path

from .noise import NoiseParams

__all__ = [
    "GridLayout",
    "FastParams",
    "DelaySchedule",
    "delay_schedule",
    "locate",
    "split_phrase",
    "min_scans",
    "min_time_units",
    "final_hold_units",
    "layout_from_dict",
    "layout_to_dict",
    "load_layout",
    "builtin_layout",
    "builtin_layout_names",
    "FIXTURE_DIR_ENV",
]

#: Environment variable naming a directory whose ``*.json`` files override
#: the layouts bundled with the package.
FIXTURE_DIR_ENV = "SCANSIM_FIXTURES"


@dataclass(frozen=True)
class GridLayout:
    """Row-major scanning grid.

    ``rows`` holds one string per row, one symbol per character.  The
    underscore and full stop conventionally mark ends of words; ``"_"`` is
    rendered as a space in produced text.  ``tick_prefix`` records whether
    group scans open with an audible tick before the first cell.
    """

    rows: tuple[str, ...]
    delete_symbol: str = "←"
    terminators: frozenset[str] = frozenset({"_", "."})
    tick_prefix: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "terminators", frozenset(self.terminators))
        if not self.rows or any(len(row) == 0 for row in self.rows):
            raise ValueError("a layout needs at least one non-empty row")
        seen: set[str] = set()
        for row in self.rows:
            for symbol in row:
                if symbol in seen:
                    raise ValueError(f"symbol {symbol!r} appears more than once in the grid")
                seen.add(symbol)
        if len(self.delete_symbol) != 1:
            raise ValueError(f"delete symbol must be a single character, got {self.delete_symbol!r}")
        if self.delete_symbol not in seen:
            raise ValueError(f"delete symbol {self.delete_symbol!r} is not in the grid")
        present_terminators = self.terminators & seen
        if not present_terminators:
            raise ValueError(f"no terminator from {sorted(self.terminators)} is present in the grid")
        if self.delete_symbol in self.terminators:
            raise ValueError("the delete symbol cannot also be a terminator")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def max_row_len(self) -> int:
        return max(len(row) for row in self.rows)

    @property
    def n_cells_max(self) -> int:
        """Largest group length: cells in a row scan or in the longest column scan."""
        return max(self.n_rows, self.max_row_len)

    def row_len(self, row: int) -> int:
        """Number of cells in 1-based row ``row``."""
        if not 1 <= row <= self.n_rows:
            raise IndexError(f"row {row} outside 1..{self.n_rows}")
        return len(self.rows[row - 1])

    def symbol_at(self, row: int, col: int) -> str:
        """Symbol in 1-based cell ``(row, col)``."""
        if not 1 <= row <= self.n_rows:
            raise IndexError(f"row {row} outside 1..{self.n_rows}")
        if not 1 <= col <= len(self.rows[row - 1]):
            raise IndexError(f"column {col} outside 1..{len(self.rows[row - 1])} in row {row}")
        return self.rows[row - 1][col - 1]

    @cached_property
    def _positions(self) -> dict[str, tuple[int, int]]:
        table: dict[str, tuple[int, int]] = {}
        for r, row in enumerate(self.rows, start=1):
            for c, symbol in enumerate(row, start=1):
                table[symbol] = (r, c)
        return table

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._positions

    def validate_word(self, word: str) -> None:
        """Check that ``word`` is writable: known symbols, one terminator, at the end."""
        if not word:
            raise ValueError("word must not be empty")
        for symbol in word:
            if symbol not in self._positions:
                raise ValueError(f"symbol {symbol!r} is not in the layout")
            if symbol == self.delete_symbol:
                raise ValueError("the delete symbol cannot appear in a word")
        if word[-1] not in self.terminators:
            raise ValueError(f"word must end with a terminator from {sorted(self.terminators)}")
        for symbol in word[:-1]:
            if symbol in self.terminators:
                raise ValueError("a terminator may only appear at the end of a word")


def locate(symbol: str, layout: GridLayout) -> tuple[int, int]:
    """1-based ``(row, column)`` of ``symbol`` in the grid."""
    try:
        return layout._positions[symbol]
    except KeyError:
        raise KeyError(f"symbol {symbol!r} is not in the layout") from None


def split_phrase(phrase: str, layout: GridLayout) -> list[str]:
    """Cut a phrase into independently written words, terminators included.

    Each terminator symbol ends one word and stays attached to it, so the
    pieces concatenate back to the phrase and each piece passes
    :meth:`GridLayout.validate_word`.  The phrase must end on a terminator.
    """
    if not phrase:
        raise ValueError("phrase must not be empty")
    words: list[str] = []
    start = 0
    for i, symbol in enumerate(phrase):
        if symbol in layout.terminators:
            words.append(phrase[start : i + 1])
            start = i + 1
    if start != len(phrase):
        raise ValueError(f"phrase must end with a terminator from {sorted(layout.terminators)}")
    for word in words:
        layout.validate_word(word)
    return words


@dataclass(frozen=True)
class FastParams:
    """Parameters of the fast scanning mode.

    Cells race past at ``t_fast`` seconds each; only the final cell of a
    group holds for the standard dwell ``base.t_scan`` so the user can
    react.  Decisions are deferred to the end of each group scan.
    """

    base: NoiseParams
    t_fast: float

    def __post_init__(self) -> None:
        if not 0 < self.t_fast <= self.base.t_scan:
            raise ValueError(
                f"t_fast must satisfy 0 < t_fast <= t_scan, got t_fast={self.t_fast}, t_scan={self.base.t_scan}"
            )


def final_hold_units(t_scan: float, t_fast: float) -> int:
    """Number of fast dwell units covered by the final hold: ``ceil(t_scan / t_fast)``.

    A small relative guard keeps exact ratios (for example 0.5 / 0.05) from
    rounding up one unit due to floating-point representation.
    """
    if t_scan <= 0 or t_fast <= 0:
        raise ValueError("dwell times must be > 0")
    ratio = t_scan / t_fast
    return max(1, int(math.ceil(ratio - 1e-9)))


@dataclass(frozen=True)
class DelaySchedule:
    """Per-cell dwell times of one group scan, tick first.

    ``durations[0]`` paces the tick that opens the group (doubled when the
    first visible cell blends into it) and ``durations[1:]`` pace the
    remaining cells of the longest group.
    """

    durations: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "durations", tuple(float(d) for d in self.durations))
        if len(self.durations) < 2:
            raise ValueError("a schedule needs a tick entry and at least one cell entry")
        if any(d <= 0 for d in self.durations):
            raise ValueError("all schedule durations must be > 0")

    @property
    def total(self) -> float:
        return float(sum(self.durations))


def delay_schedule(
    mode: str,
    layout: GridLayout,
    params: NoiseParams,
    fast_params: FastParams | None = None,
) -> DelaySchedule:
    """Dwell-time schedule for the longest group scan of ``layout``.

    Standard mode dwells ``t_scan`` on every cell with a doubled opening
    tick.  Fast mode dwells ``t_fast`` on every cell (again with a doubled
    opening tick) except the final cell of the group, which holds for the
    standard ``t_scan``.
    """
    n = layout.n_cells_max
    if mode == "slow":
        t = params.t_scan
        return DelaySchedule((2.0 * t,) + (t,) * n)
    if mode == "fast":
        if fast_params is None:
            raise ValueError("fast mode needs fast_params")
        tf = fast_params.t_fast
        ts = fast_params.base.t_scan
        return DelaySchedule((2.0 * tf,) + (tf,) * (n - 1) + (ts,))
    raise ValueError(f"unknown mode {mode!r}; expected 'slow' or 'fast'")


def _group_units(group_len: int, k_delta: int) -> int:
    """Weighted units consumed by one full group scan.

    The first cell carries the tick and counts double; the final cell of a
    group counts ``k_delta`` units (1 when counting scan events).
    """
    if group_len == 1:
        return 1 + k_delta
    return group_len + k_delta


def min_scans(word: str, layout: GridLayout, mode: str = "slow") -> int:
    """Fewest scan events needed to write ``word`` without any noise.

    Every highlighted cell counts one scan; the first cell of each group
    counts two because of its audible tick.  In the standard mode a group
    scan is cut short by the selection click, so each symbol costs its row
    index plus its column index plus two tick units.  In the fast mode every
    group scan runs to its end before the deferred decision, so each symbol
    costs two full group scans.
    """
    if mode not in ("slow", "fast"):
        raise ValueError(f"unknown mode {mode!r}; expected 'slow' or 'fast'")
    layout.validate_word(word)
    total = 0
    for symbol in word:
        row, col = locate(symbol, layout)
        if mode == "slow":
            total += (row + 1) + (col + 1)
        else:
            total += _group_units(layout.n_rows, 1)
            total += _group_units(layout.row_len(row), 1)
    return total


def min_time_units(word: str, layout: GridLayout, mode: str = "slow", k_delta: int = 1) -> int:
    """Fewest per-cell delay units needed to write ``word`` without noise.

    Identical to :func:`min_scans` in the standard mode.  In the fast mode
    the final cell of each group holds for the full standard delay, which is
    ``k_delta`` fast-delay units, so a full group scan of ``n`` cells costs
    ``n + k_delta`` units (tick included).  Multiply by the per-cell delay
    for seconds.
    """
    if mode not in ("slow", "fast"):
        raise ValueError(f"unknown mode {mode!r}; expected 'slow' or 'fast'")
    if k_delta < 1:
        raise ValueError(f"k_delta must be >= 1, got {k_delta}")
    if mode == "slow":
        return min_scans(word, layout, mode)
    layout.validate_word(word)
    total = 0
    for symbol in word:
        row, col = locate(symbol, layout)
        total += _group_units(layout.n_rows, k_delta)
        total += _group_units(layout.row_len(row), k_delta)
    return total


# ---------------------------------------------------------------------------
# serialisation


def layout_from_dict(data: dict) -> GridLayout:
    """Build a layout from its JSON form: keys ``rows``, ``delete``, ``terminators``, ``tick_prefix``."""
    try:
        rows = data["rows"]
    except KeyError:
        raise ValueError("layout data needs a 'rows' key") from None
    if not isinstance(rows, (list, tuple)) or not all(isinstance(r, str) for r in rows):
        raise ValueError("'rows' must be a list of strings, one symbol per character")
    return GridLayout(
        rows=tuple(rows),
        delete_symbol=data.get("delete", "←"),
        terminators=frozenset(data.get("terminators", ("_", "."))),
        tick_prefix=bool(data.get("tick_prefix", True)),
    )


def layout_to_dict(layout: GridLayout) -> dict:
    """JSON form of a layout, inverse of :func:`layout_from_dict`."""
    return {
        "rows": list(layout.rows),
        "delete": layout.delete_symbol,
        "terminators": sorted(layout.terminators),
        "tick_prefix": layout.tick_prefix,
    }


def load_layout(path: "str | Path") -> GridLayout:
    """Read a layout from a JSON file."""
    with open(path, encoding="utf-8") as fh:
        return layout_from_dict(json.load(fh))


def _fixture_dir() -> "Path | None":
    override = os.environ.get(FIXTURE_DIR_ENV)
    if override:
        return Path(override)
    return None


def builtin_layout_names() -> list[str]:
    """Names of the layouts available to :func:`builtin_layout`."""
    override = _fixture_dir()
    if override is not None:
        return sorted(p.stem for p in override.glob("*.json"))
    package_dir = resources.files("scansim") / "fixtures"
    return sorted(p.name[: -len(".json")] for p in package_dir.iterdir() if p.name.endswith(".json"))

def builtin_layout(name: str) -> GridLayout:
    """Load a named layout bundled with the package.

    A directory named by the ``SCANSIM_FIXTURES`` environment variable
    overrides the bundled files, allowing tests and deployments to swap
    layouts without reinstalling.
    """
    override = _fixture_dir()
    if override is not None:
        path = override / f"{name}.json"
        if not path.exists():
            raise KeyError(f"no layout named {name!r} in {override}")
        return load_layout(path)
    package_file = resources.files("scansim") / "fixtures" / f"{name}.json"
    if not package_file.is_file():
        raise KeyError(f"no bundled layout named {name!r}; available: {builtin_layout_names()}")
    return layout_from_dict(json.loads(package_file.read_text(encoding="utf-8")))
