"""Live HTTP facade: a human-operable scanner with seeded synthetic noise.

Endpoints (JSON unless noted):

* ``POST /sessions`` — create a session from a scanning configuration.
* ``POST /sessions/{id}/click`` — register a switch activation at a
  client-measured timestamp.
* ``GET /sessions/{id}/state`` — cursor, pass windows, progress
  (``?t_ms=`` advances time-driven effects first).
* ``GET /sessions/{id}/stats`` — empirical metrics beside the exact
  predictions for the same configuration.
* ``GET /sessions/{id}/log`` — completed words as line-delimited session
  records (the library's native serialisation).
* ``GET /layouts``, ``GET /healthz``.

API timestamps are milliseconds since session start.  The server is the
sole timing authority for synthetic noise: each session derives two
counter-based streams from its seed — one paces false positives, the
other draws one (latency, drop) pair per posted click — so replaying the
same click timestamps against a freshly started server reproduces every
effect.  The scanner itself advances lazily: passes, undo waits, false
positives, and scan-budget timeouts are applied whenever a request moves
the session clock forward, which keeps state a pure function of the seed
and the received timestamps.

The service computes nothing the core modules cannot: the cursor moves
through :func:`~scansim.chain.click_outcome` / MISS semantics, windows come
from :func:`~scansim.noise.scan_windows`, and the stats endpoint reuses the
exact moment recursions behind the sweep runner.
"""

from __future__ import annotations

import math
import secrets
import threading
from dataclasses import replace
from pathlib import Path
from typing import Union

import numpy as np
from fastapi import Body, FastAPI, HTTPException
from fastapi.responses import JSONResponse, PlainTextResponse

from .chain import (
    COLUMN_PHASE,
    OUTCOME_CORRECT,
    OUTCOME_FAILURE,
    ROW_PHASE,
    StateId,
    build_fast,
    build_slow,
    click_outcome,
    miss_successor,
    scan_horizon,
)
from .experiments import analytic_phrase_metrics
from .layout import (
    FastParams,
    GridLayout,
    builtin_layout,
    builtin_layout_names,
    delay_schedule,
    final_hold_units,
    layout_to_dict,
    split_phrase,
)
from .montecarlo import (
    EVENT_DELETE,
    EVENT_FALSE_POSITIVE,
    EVENT_REJECTED_CLICK,
    EVENT_SCAN,
    EVENT_SELECTION,
    EVENT_TERMINAL,
    EVENT_TRUE_CLICK,
    EVENT_UNDO,
    SessionLog,
    _decode_fast_click,
)
from .noise import (
    RNG_ALGORITHM,
    ClickTiming,
    NoiseParams,
    SwitchNoise,
    make_rng,
    sample_click_offsets,
    scan_windows,
)
from .pmf import count_moments, errors_pmf, min_support, outcome_probabilities

_MS = 1000.0


def _phase_name(r: int) -> str:
    return "row" if r == ROW_PHASE else "column"


# ---------------------------------------------------------------------------
# live word machine


class _LiveWord:
    """One word of a live session, advanced dwell by dwell (pass by pass).

    Mirrors the sampling engine's per-word accounting exactly — entry
    weights, undo waits, horizon timeouts — except that registered clicks
    arrive from the network instead of a sampler.  All ``t_*`` attributes
    are absolute session seconds; logged event times are word-local.
    """

    def __init__(
        self,
        word: str,
        layout: GridLayout,
        params: NoiseParams,
        fast: Union[FastParams, None],
        latency: str,
        seed: int,
        start: float,
    ) -> None:
        self.word = word
        self.layout = layout
        self.params = params
        self.fast = fast
        self.mode = "fast" if fast is not None else "slow"
        self.latency = latency if self.mode == "slow" else "compensated"
        self.seed = seed
        self.start = start
        self.chars = len(word)
        self.state = StateId(ROW_PHASE, 1, 0, 0, None)
        self.horizon = scan_horizon(word, layout, params)
        if self.mode == "slow":
            self.step = params.t_scan
            self.hold = None
            self.k_delta = 1
        else:
            self.step = fast.t_fast
            self.hold = params.t_scan
            self.k_delta = final_hold_units(params.t_scan, fast.t_fast)
        self.unit_delay = self.step
        self.pass_start = start
        self.events: list = [
            {"t": 0.0, "kind": EVENT_SCAN, "phase": "row", "cell": 1, "weight": 2}
        ]
        self.scans = 2
        self.time_units = 2
        if self.mode == "fast" and layout.n_rows == 1:
            self.time_units += self.k_delta - 1
        self.clicks = 0
        self.hops = 0
        self.typed: list = []
        self.done = False
        self.outcome: Union[str, None] = None
        self.errors = 0
        self.frontier: Union[float, None] = None
        self.log: Union[SessionLog, None] = None
        self.pending: list = []  # fast only: (abs time, event kind) for the open pass
        if self.mode == "fast":
            self._open_fast_pass()

    # -- shared helpers ------------------------------------------------------

    def _group_len(self, state: StateId) -> int:
        if state.r == ROW_PHASE:
            return self.layout.n_rows
        return self.layout.row_len(state.row)

    def _windows(self, state: StateId):
        return scan_windows(self._group_len(state), self.step, final_hold=self.hold)

    def _local(self, t_abs: float) -> float:
        return t_abs - self.start

    def _record_typed(self, old: StateId, new, symbol: str) -> None:
        """Track the written letters for display from the cursor change."""
        if isinstance(new, str):
            self.typed.append(symbol)  # the terminator that ended the word
            return
        if new.m > old.m or new.e > old.e:
            self.typed.append(symbol)
        elif new.m < old.m or new.e < old.e:
            if self.typed:
                self.typed.pop()

    def _seal(self, outcome: str, errors: int, cause: str, t_local: float, frontier: float) -> None:
        self.events.append(
            {"t": t_local, "kind": EVENT_TERMINAL, "outcome": outcome, "errors": errors, "cause": cause}
        )
        self.done = True
        self.outcome = outcome
        self.errors = errors
        self.frontier = frontier
        self.log = SessionLog(
            word=self.word,
            mode=self.mode,
            latency=self.latency,
            seed=self.seed,
            rng_algorithm=RNG_ALGORITHM,
            unit_delay=self.unit_delay,
            horizon=self.horizon,
            hops=self.hops,
            outcome=outcome,
            events=self.events,
            totals={"scans": self.scans, "clicks": self.clicks, "errors": self.errors},
            time_units=self.time_units,
            seconds=self.time_units * self.unit_delay,
        ).validate()

    # -- standard mode -------------------------------------------------------

    def exposed_window(self) -> tuple:
        """Absolute [start, end) of the currently dwelled cell's click window."""
        w = self._windows(self.state)[self.state.v_prime - 1]
        return (self.pass_start + w.start, self.pass_start + w.end)

    def _enter_slow(self, successor: StateId, dwell_end: float, notes: list) -> None:
        first = successor.v_prime == 1
        weight = 2 if first else 1
        self.scans += weight
        self.time_units += weight
        if first:
            self.pass_start = dwell_end
            t_next = self.pass_start
        else:
            w = self._windows(successor)[successor.v_prime - 1]
            t_next = self.pass_start + w.start
        self.events.append(
            {
                "t": self._local(t_next),
                "kind": EVENT_SCAN,
                "phase": _phase_name(successor.r),
                "cell": successor.v_prime,
                "weight": weight,
            }
        )
        self.state = successor
        if self.hops >= self.horizon:
            end = self.pass_start + self._windows(successor)[successor.v_prime - 1].end
            errors = self.chars - successor.m + successor.e
            self._seal(OUTCOME_FAILURE, errors, "timeout", self._local(t_next), end)
            notes.append({"kind": "timeout", "t_ms": t_next * _MS, "word": self.word})

    def resolve_slow_click(self, t_abs: float, kind: str, notes: list) -> dict:
        """A registered event inside the exposed window decides this dwell."""
        ws, we = self.exposed_window()
        state = self.state
        cell = state.v_prime
        t_local = self._local(t_abs)
        self.hops += 1
        self.clicks += 1
        self.events.append({"t": t_local, "kind": kind, "cell": cell})
        selection = {
            "t": t_local,
            "kind": EVENT_SELECTION,
            "phase": _phase_name(state.r),
            "cell": cell,
            "source": kind,
        }
        symbol = None
        if state.r == COLUMN_PHASE:
            symbol = self.layout.symbol_at(state.row, cell)
            selection["symbol"] = symbol
        self.events.append(selection)
        info = {"phase": selection["phase"], "cell": cell, "symbol": symbol, "source": kind}
        notes.append({"kind": "selection", "t_ms": t_abs * _MS, **{k: v for k, v in info.items() if v is not None}})

        successor = click_outcome(state, cell, self.word, self.layout)
        if symbol is not None:
            self._record_typed(state, successor, symbol)
        if isinstance(successor, str) or successor.e >= self.params.error_limit:
            outcome = successor if isinstance(successor, str) else OUTCOME_FAILURE
            errors = 0 if outcome == OUTCOME_CORRECT else self.chars - state.m + state.e + 1
            self._seal(outcome, errors, "selection", t_local, we)
            return info
        if (
            state.r == COLUMN_PHASE
            and symbol == self.layout.delete_symbol
            and (state.e > 0 or state.m > 0)
        ):
            removed = "pending-letter" if state.e > 0 else "written-letter"
            self.events.append({"t": t_local, "kind": EVENT_DELETE, "removed": removed})
            notes.append({"kind": "delete", "t_ms": t_abs * _MS, "removed": removed})
        self._enter_slow(successor, we, notes)
        return info

    def resolve_slow_miss(self, notes: list) -> None:
        """The dwell expired with no registered event."""
        _, we = self.exposed_window()
        state = self.state
        self.hops += 1
        successor = miss_successor(state, self.layout, self.params.undo_window)
        if (
            state.r == COLUMN_PHASE
            and state.v_prime == self._group_len(state)
            and state.u == self.params.undo_window - 1
        ):
            self.events.append({"t": self._local(we), "kind": EVENT_UNDO, "row": state.row})
            notes.append({"kind": "undo", "t_ms": we * _MS, "row": state.row})
        self._enter_slow(successor, we, notes)

    # -- fast mode -----------------------------------------------------------

    def _open_fast_pass(self, notes: Union[list, None] = None) -> None:
        """Start (or fold) the pass whose first cell was just entered."""
        state = self.state
        windows = self._windows(state)
        group_len = len(windows)
        self.pass_windows = windows
        self.pass_span = windows[-1].end
        self.pending = []
        if self.hops + group_len <= self.horizon:
            return
        # the pass cannot finish inside the scan budget: walk the cells
        # that still fit, then abandon the word
        remaining = self.horizon - self.hops
        phase = _phase_name(state.r)
        t_fold = self.pass_start
        for cell in range(2, remaining + 2):
            self.scans += 1
            self.time_units += self.k_delta if cell == group_len else 1
            t_fold = self.pass_start + windows[cell - 1].start
            self.events.append(
                {"t": self._local(t_fold), "kind": EVENT_SCAN, "phase": phase, "cell": cell, "weight": 1}
            )
        self.hops += remaining
        errors = self.chars - state.m + state.e
        frontier = self.pass_start + windows[remaining].end
        self._seal(OUTCOME_FAILURE, errors, "timeout", self._local(t_fold), frontier)
        if notes is not None:
            notes.append({"kind": "timeout", "t_ms": t_fold * _MS, "word": self.word})

    def pass_end(self) -> float:
        return self.pass_start + self.pass_span

    def queue_fast_click(self, t_abs: float, kind: str) -> None:
        self.pending.append((t_abs, kind))

    def close_fast_pass(self, fp_times: list, notes: list) -> Union[dict, None]:
        """Score the finished pass: first registered event wins, decisions at the end."""
        state = self.state
        windows = self.pass_windows
        group_len = len(windows)
        span = self.pass_span
        phase = _phase_name(state.r)
        timing = self.params.click_timing

        pass_events = []
        for cell in range(2, group_len + 1):
            self.scans += 1
            self.time_units += self.k_delta if cell == group_len else 1
            pass_events.append(
                {
                    "t": self._local(self.pass_start + windows[cell - 1].start),
                    "kind": EVENT_SCAN,
                    "phase": phase,
                    "cell": cell,
                    "weight": 1,
                }
            )
        self.hops += group_len

        candidates = [(t - self.pass_start, kind) for t, kind in self.pending]
        candidates.extend((t - self.pass_start, EVENT_FALSE_POSITIVE) for t in fp_times)
        candidates.sort(key=lambda c: c[0])
        self.pending = []

        winner = None
        for t_ev, kind in candidates:
            clipped = self.pass_start + min(max(t_ev, 0.0), span)
            pass_events.append({"t": self._local(clipped), "kind": kind, "phase": phase})
            if kind != EVENT_REJECTED_CLICK and winner is None:
                winner = (t_ev, kind)
        pass_events.sort(key=lambda ev: ev["t"])
        self.events.extend(pass_events)
        decision_t = self.pass_start + span
        decision_local = self._local(decision_t)

        info = None
        registered = False
        if winner is None:
            successor = miss_successor(
                replace(state, v_prime=group_len), self.layout, self.params.undo_window
            )
        else:
            t_win, kind_win = winner
            cell = _decode_fast_click(t_win - timing.delta, group_len, self.step, self.hold)
            registered = cell > 0
            if not registered:
                successor = miss_successor(
                    replace(state, v_prime=group_len), self.layout, self.params.undo_window
                )
            else:
                self.clicks += 1
                selection = {
                    "t": decision_local,
                    "kind": EVENT_SELECTION,
                    "phase": phase,
                    "cell": cell,
                    "source": kind_win,
                }
                symbol = None
                if state.r == COLUMN_PHASE:
                    symbol = self.layout.symbol_at(state.row, cell)
                    selection["symbol"] = symbol
                self.events.append(selection)
                info = {"phase": phase, "cell": cell, "symbol": symbol, "source": kind_win}
                notes.append(
                    {"kind": "selection", "t_ms": decision_t * _MS,
                     **{k: v for k, v in info.items() if v is not None}}
                )
                successor = click_outcome(state, cell, self.word, self.layout)
                if symbol is not None:
                    self._record_typed(state, successor, symbol)
                if isinstance(successor, str) or successor.e >= self.params.error_limit:
                    outcome = successor if isinstance(successor, str) else OUTCOME_FAILURE
                    errors = 0 if outcome == OUTCOME_CORRECT else self.chars - state.m + state.e + 1
                    self._seal(outcome, errors, "selection", decision_local, decision_t)
                    return info
                if (
                    state.r == COLUMN_PHASE
                    and symbol == self.layout.delete_symbol
                    and (state.e > 0 or state.m > 0)
                ):
                    removed = "pending-letter" if state.e > 0 else "written-letter"
                    self.events.append({"t": decision_local, "kind": EVENT_DELETE, "removed": removed})
                    notes.append({"kind": "delete", "t_ms": decision_t * _MS, "removed": removed})
        if not registered and state.r == COLUMN_PHASE and state.u == self.params.undo_window - 1:
            self.events.append({"t": decision_local, "kind": EVENT_UNDO, "row": state.row})
            notes.append({"kind": "undo", "t_ms": decision_t * _MS, "row": state.row})

        next_len = self._group_len(successor)
        self.scans += 2
        self.time_units += 2 + (self.k_delta - 1 if next_len == 1 else 0)
        self.pass_start = decision_t
        self.events.append(
            {"t": decision_local, "kind": EVENT_SCAN, "phase": _phase_name(successor.r), "cell": 1, "weight": 2}
        )
        self.state = successor
        self._open_fast_pass(notes)
        return info


# ---------------------------------------------------------------------------
# session


class _Session:
    """One live scanning session: seeded noise streams plus the word cursor."""

    def __init__(
        self,
        layout_name: str,
        layout: GridLayout,
        words: list,
        phrase: str,
        params: NoiseParams,
        fast: Union[FastParams, None],
        latency: str,
        engine: str,
        seed: int,
    ) -> None:
        self.id = secrets.token_hex(8)
        self.lock = threading.Lock()
        self.layout_name = layout_name
        self.layout = layout
        self.words = words
        self.phrase = phrase
        self.params = params
        self.fast = fast
        self.mode = "fast" if fast is not None else "slow"
        self.latency = latency if self.mode == "slow" else "compensated"
        self.engine = engine
        self.seed = seed
        self._fp_rng = make_rng(np.random.SeedSequence((seed, 0)))
        self._click_rng = make_rng(np.random.SeedSequence((seed, 1)))
        self._lam = params.switch_noise.lam
        self.next_fp: Union[float, None] = None
        if self._lam > 0.0:
            self.next_fp = float(self._fp_rng.exponential(1.0 / self._lam))
        self.word_index = 0
        self.live: Union[_LiveWord, None] = self._new_word(0, 0.0)
        self.sealed: list = []  # finished _LiveWord objects, in order
        self.done = False
        self._analytic_cache: Union[dict, None] = None

    def _new_word(self, index: int, start: float) -> _LiveWord:
        return _LiveWord(
            self.words[index], self.layout, self.params, self.fast, self.latency, self.seed, start
        )

    def _pop_fp(self) -> float:
        t = self.next_fp
        self.next_fp = t + float(self._fp_rng.exponential(1.0 / self._lam))
        return t

    def _rotate(self, notes: list) -> None:
        """Retire the finished word and start the next, cascading folds included."""
        while self.live is not None and self.live.done:
            finished = self.live
            self.sealed.append(finished)
            notes.append(
                {
                    "kind": "word-end",
                    "t_ms": finished.frontier * _MS,
                    "word": finished.word,
                    "outcome": finished.outcome,
                    "errors": finished.errors,
                }
            )
            if self.word_index + 1 < len(self.words):
                self.word_index += 1
                self.live = self._new_word(self.word_index, finished.frontier)
            else:
                self.live = None
                self.done = True

    def advance(self, t_limit: float, notes: list) -> None:
        """Apply false positives, dwell expiries, and pass closures before ``t_limit``."""
        self._rotate(notes)  # a fresh fast word may fold immediately
        while not self.done:
            lw = self.live
            if lw.mode == "slow":
                ws, we = lw.exposed_window()
                while self.next_fp is not None and self.next_fp < min(ws, t_limit):
                    t_fp = self._pop_fp()  # tick or already-decided region: no cell lit
                    notes.append({"kind": "false-positive", "t_ms": t_fp * _MS, "landed": False})
                if self.next_fp is not None and self.next_fp < min(we, t_limit):
                    t_fp = self._pop_fp()
                    notes.append({"kind": "false-positive", "t_ms": t_fp * _MS, "landed": True})
                    lw.resolve_slow_click(t_fp, EVENT_FALSE_POSITIVE, notes)
                    self._rotate(notes)
                    continue
                if we <= t_limit:
                    lw.resolve_slow_miss(notes)
                    self._rotate(notes)
                    continue
                break
            else:
                while self.next_fp is not None and self.next_fp < min(lw.pass_start, t_limit):
                    t_fp = self._pop_fp()  # a pass decided earlier already covered this time
                    notes.append({"kind": "false-positive", "t_ms": t_fp * _MS, "landed": False})
                end = lw.pass_end()
                if end <= t_limit:
                    fp_times = []
                    while self.next_fp is not None and self.next_fp < end:
                        t_fp = self._pop_fp()
                        fp_times.append(t_fp)
                        notes.append({"kind": "false-positive", "t_ms": t_fp * _MS, "landed": True})
                    lw.close_fast_pass(fp_times, notes)
                    self._rotate(notes)
                    continue
                break

    # -- request handlers ----------------------------------------------------

    def handle_click(self, t_ms: float) -> dict:
        with self.lock:
            if self.done:
                raise HTTPException(status_code=409, detail="the session has already finished")
            t_click = t_ms / _MS
            timing = self.params.click_timing
            offset = timing.delta + float(sample_click_offsets(timing, self._click_rng, 1)[0])
            kept = bool(self._click_rng.random() >= self.params.switch_noise.f)
            notes: list = []
            selection = None
            effect = "rejected"
            detail = ""
            if self.mode == "slow":
                t_dec = t_click + offset
                if self.latency == "compensated":
                    t_dec -= timing.delta
                self.advance(t_dec, notes)
                if self.done:
                    detail = "the session finished before the click took effect"
                else:
                    lw = self.live
                    ws, we = lw.exposed_window()
                    if t_dec < lw.start:
                        detail = "an earlier word already covered the effective click time"
                    elif t_dec < ws:
                        detail = "no cell was lit at the effective click time"
                    else:
                        # out-of-order timestamps may map into this window behind a
                        # drop already logged there; the log stays time-ordered and
                        # the same cell is lit either way
                        t_dec = max(t_dec, lw.start + lw.events[-1]["t"])
                        if not kept:
                            detail = "the switch dropped the click"
                            lw.events.append(
                                {"t": lw._local(t_dec), "kind": EVENT_REJECTED_CLICK, "cell": lw.state.v_prime}
                            )
                        else:
                            selection = lw.resolve_slow_click(t_dec, EVENT_TRUE_CLICK, notes)
                            self._rotate(notes)
                            effect = "accepted"
                            detail = "the click selected the lit cell"
            else:
                t_eff = t_click + offset  # the decision subtracts the latency when decoding
                self.advance(t_eff, notes)
                if self.done:
                    detail = "the session finished before the click took effect"
                elif t_eff < self.live.pass_start:
                    detail = "that group pass was already decided"
                else:
                    self.live.queue_fast_click(t_eff, EVENT_TRUE_CLICK if kept else EVENT_REJECTED_CLICK)
                    if kept:
                        effect = "accepted"
                        detail = "queued; the group pass decides at its end"
                    else:
                        detail = "the switch dropped the click"
            fp_fired = any(n["kind"] == "false-positive" for n in notes)
            if effect != "accepted" and fp_fired:
                effect = "false-positive-injected"
            terminal_note = next((n for n in notes if n["kind"] == "word-end"), None)
            return {
                "effect": effect,
                "detail": detail,
                "selection": selection,
                "word_outcome": terminal_note,
                "applied": notes,
                "selections": self._total_clicks(),
                "state": self._state_view(),
            }

    def poll(self, t_ms: Union[float, None]) -> dict:
        with self.lock:
            notes: list = []
            if t_ms is not None and not self.done:
                self.advance(t_ms / _MS, notes)
            view = self._state_view()
            view["applied"] = notes
            return view

    def _total_clicks(self) -> int:
        total = sum(w.clicks for w in self.sealed)
        if self.live is not None:
            total += self.live.clicks
        return total

    def _written(self) -> str:
        text = []
        for w in self.sealed:
            text.extend(w.typed)
        if self.live is not None:
            text.extend(self.live.typed)
        return "".join(text).replace("_", " ")

    def _state_view(self) -> dict:
        view = {
            "id": self.id,
            "mode": self.mode,
            "done": self.done,
            "word_index": self.word_index,
            "total_words": len(self.words),
            "written": self._written(),
            "selections": self._total_clicks(),
            "completed": [
                {"word": w.word, "outcome": w.outcome, "errors": w.errors} for w in self.sealed
            ],
        }
        lw = self.live
        if lw is None:
            return view
        windows = lw._windows(lw.state) if lw.mode == "slow" else lw.pass_windows
        view.update(
            {
                "word": lw.word,
                "phase": _phase_name(lw.state.r),
                "cell": lw.state.v_prime,
                "row": lw.state.row,
                "letters_written": lw.state.m,
                "pending_letters": lw.state.e,
                "undo_passes": lw.state.u,
                "pass_start_ms": lw.pass_start * _MS,
                "word_start_ms": lw.start * _MS,
                "tick_ms": [lw.pass_start * _MS, (lw.pass_start + lw.step) * _MS],
                "windows_ms": [
                    [(lw.pass_start + w.start) * _MS, (lw.pass_start + w.end) * _MS]
                    for w in windows
                ],
                "hops": lw.hops,
                "horizon": lw.horizon,
                "scans": lw.scans,
                "time_units": lw.time_units,
            }
        )
        return view

    def stats(self) -> dict:
        with self.lock:
            sealed = list(self.sealed)
            if not sealed:
                raise HTTPException(status_code=422, detail="no word has been completed yet")
            chars = sum(len(w.word) for w in sealed)
            seconds = math.fsum(w.time_units * w.unit_delay for w in sealed)
            clicks = sum(w.clicks for w in sealed)
            errors = sum(w.errors for w in sealed)
            scans = sum(w.scans for w in sealed)
            failed = sum(1 for w in sealed if w.outcome != OUTCOME_CORRECT)
            empirical = {
                "words": len(sealed),
                "chars": chars,
                "scans": scans,
                "clicks": clicks,
                "errors": errors,
                "seconds": seconds,
                "wpm": (chars / 5.0) / (seconds / 60.0) if seconds > 0 else None,
                "cpc": clicks / chars,
                "cer": errors / chars,
                "p_fail": failed / len(sealed),
            }
            return {"empirical": empirical, "analytic": self._analytic_view()}

    def _analytic_view(self) -> dict:
        if self.mode == "fast" and self._lam > 0.0:
            return {
                "available": False,
                "reason": "the exact fast-mode recursion does not cover false positives",
            }
        if self._analytic_cache is None:
            metrics = analytic_phrase_metrics(
                self.words, self.layout, self.params, self.fast, self.mode, self.latency
            )
            per_word = []
            for word in dict.fromkeys(self.words):
                if self.mode == "slow":
                    chain = build_slow(word, self.layout, self.params, latency=self.latency)
                else:
                    chain = build_fast(word, self.layout, self.fast)
                scans_m = count_moments(chain, "scans")
                clicks_m = count_moments(chain, "clicks")
                err = errors_pmf(chain)
                split = outcome_probabilities(chain)
                per_word.append(
                    {
                        "word": word,
                        "scans": {
                            "mean": scans_m.mean,
                            "std": scans_m.std,
                            "min": min_support(chain, "scans", OUTCOME_CORRECT),
                        },
                        "clicks": {"mean": clicks_m.mean, "std": clicks_m.std},
                        "errors": {"mean": err.mean(), "std": err.std()},
                        "outcomes": split.as_dict(),
                    }
                )
            self._analytic_cache = {"available": True, **metrics, "per_word": per_word}
        return self._analytic_cache

    def export_log(self) -> str:
        with self.lock:
            return "".join(w.log.to_jsonl() for w in self.sealed)


# ---------------------------------------------------------------------------
# configuration parsing


_TOP_KEYS = {"mode", "layout", "phrase", "seed", "engine", "latency", "params", "t_fast"}
_PARAM_KEYS = {"delta", "sigma", "f", "lambda", "t_scan", "undo_window", "error_limit", "kappa"}


def _bad(message: str) -> HTTPException:
    return HTTPException(status_code=400, detail=message)


def _number(raw, name: str) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise _bad(f"{name} must be a number")
    value = float(raw)
    if not math.isfinite(value):
        raise _bad(f"{name} must be finite")
    return value


def _parse_session_config(body) -> _Session:
    if not isinstance(body, dict):
        raise _bad("the session configuration must be a JSON object")
    unknown = sorted(set(body) - _TOP_KEYS)
    if unknown:
        raise _bad(f"unknown configuration keys: {unknown}")

    mode = body.get("mode", "slow")
    if mode not in ("slow", "fast"):
        raise _bad(f"mode must be 'slow' or 'fast', got {mode!r}")
    engine = body.get("engine", "analytic")
    if engine not in ("analytic", "montecarlo"):
        raise _bad(f"engine must be 'analytic' or 'montecarlo', got {engine!r}")
    latency = body.get("latency", "shifted")
    if latency not in ("shifted", "compensated"):
        raise _bad(f"latency must be 'shifted' or 'compensated', got {latency!r}")
    seed = body.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise _bad("seed must be an integer")

    layout_name = body.get("layout", "grid2x2")
    try:
        layout = builtin_layout(layout_name)
    except KeyError:
        raise _bad(
            f"unknown layout {layout_name!r}; available: {builtin_layout_names()}"
        ) from None

    phrase = body.get("phrase")
    if not isinstance(phrase, str) or not phrase:
        raise _bad("phrase is required")
    try:
        words = split_phrase(phrase, layout)
    except ValueError as exc:
        raise _bad(str(exc)) from None

    raw = body.get("params", {})
    if not isinstance(raw, dict):
        raise _bad("params must be a JSON object")
    unknown = sorted(set(raw) - _PARAM_KEYS)
    if unknown:
        raise _bad(f"unknown params keys: {unknown}")
    try:
        params = NoiseParams(
            click_timing=ClickTiming(
                delta=_number(raw.get("delta", 0.0), "delta"),
                sigma=_number(raw.get("sigma", 0.05), "sigma"),
            ),
            switch_noise=SwitchNoise(
                f=_number(raw.get("f", 0.0), "f"),
                lam=_number(raw.get("lambda", 0.0), "lambda"),
            ),
            t_scan=_number(raw.get("t_scan", 1.0), "t_scan"),
            undo_window=int(raw.get("undo_window", 2)),
            error_limit=int(raw.get("error_limit", 2)),
            kappa=_number(raw.get("kappa", 10.0), "kappa"),
        )
    except (ValueError, TypeError) as exc:
        raise _bad(str(exc)) from None

    fast = None
    if mode == "fast":
        if "t_fast" not in body:
            raise _bad("fast mode needs t_fast (the reduced dwell, in seconds)")
        try:
            fast = FastParams(base=params, t_fast=_number(body["t_fast"], "t_fast"))
        except ValueError as exc:
            raise _bad(str(exc)) from None
        if params.switch_noise.lam > 0.0 and engine != "montecarlo":
            raise _bad(
                "exact fast-mode predictions do not cover false positives (lambda > 0); "
                "set engine='montecarlo' for a sampling-only session"
            )
    elif "t_fast" in body:
        raise _bad("t_fast only applies to the fast mode")

    return _Session(layout_name, layout, words, phrase, params, fast, latency, engine, seed)


# ---------------------------------------------------------------------------
# application


def create_app(webui_dir: Union[str, None] = None) -> FastAPI:
    """Build the service; sessions live for the process lifetime only.

    ``webui_dir`` (or the ``SCANSIM_WEBUI`` environment variable) may point
    at a built static bundle to serve on the root path.
    """
    app = FastAPI(title="scansim service", docs_url=None, redoc_url=None)
    sessions: dict = {}
    registry_lock = threading.Lock()

    def _get(sid: str) -> _Session:
        with registry_lock:
            session = sessions.get(sid)
        if session is None:
            raise HTTPException(status_code=404, detail=f"no session {sid!r}")
        return session

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.get("/layouts")
    def layouts() -> dict:
        return {
            "layouts": [
                {"name": name, **layout_to_dict(builtin_layout(name))}
                for name in builtin_layout_names()
            ]
        }

    @app.post("/sessions", status_code=201)
    def create_session(body: dict = Body(...)) -> JSONResponse:
        session = _parse_session_config(body)
        with registry_lock:
            sessions[session.id] = session
        schedule = delay_schedule(session.mode, session.layout, session.params, session.fast)
        payload = {
            "id": session.id,
            "mode": session.mode,
            "latency": session.latency,
            "engine": session.engine,
            "seed": session.seed,
            "phrase": session.phrase,
            "words": session.words,
            "layout": {"name": session.layout_name, **layout_to_dict(session.layout)},
            "schedule": list(schedule.durations),
            "unit_delay": session.live.unit_delay,
            "state": session._state_view(),
        }
        return JSONResponse(status_code=201, content=payload)

    @app.post("/sessions/{sid}/click")
    def click(sid: str, body: dict = Body(...)) -> dict:
        session = _get(sid)
        if not isinstance(body, dict) or "t_ms" not in body:
            raise _bad("the click body needs a t_ms timestamp (milliseconds since session start)")
        t_ms = _number(body["t_ms"], "t_ms")
        if t_ms < 0:
            raise _bad("t_ms must be >= 0")
        return session.handle_click(t_ms)

    @app.get("/sessions/{sid}/state")
    def state(sid: str, t_ms: Union[float, None] = None) -> dict:
        return _get(sid).poll(t_ms)

    @app.get("/sessions/{sid}/stats")
    def stats(sid: str) -> dict:
        return _get(sid).stats()

    @app.get("/sessions/{sid}/log")
    def export_log(sid: str) -> PlainTextResponse:
        return PlainTextResponse(_get(sid).export_log())

    bundle = webui_dir
    if bundle is None:
        import os

        bundle = os.environ.get("SCANSIM_WEBUI")
    if bundle is None:
        default = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        if default.is_dir():
            bundle = str(default)
    if bundle:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=bundle, html=True), name="webui")

    return app


app = create_app()
