/**
 * Highlight scheduling.  The server issues the absolute lit intervals of
 * the current group pass (`tick_ms`, `windows_ms`); the loop resolves the
 * active cell from the wall clock on every animation frame.  Because the
 * lookup is a pure function of absolute times, timing error never
 * accumulates — it is bounded by a single frame interval.
 */

import type { StateView } from "./types";

export type Highlight =
  | { kind: "idle" }
  | { kind: "done" }
  | { kind: "waiting" }
  | { kind: "tick" }
  | { kind: "cell"; cell: number }
  | { kind: "stale" };

export type PassWindows = Pick<StateView, "done" | "tick_ms" | "windows_ms">;

/** Resolve what is lit at session time `nowMs` under the known pass. */
export function activeHighlight(view: PassWindows | null, nowMs: number): Highlight {
  if (view === null) return { kind: "idle" };
  if (view.done) return { kind: "done" };
  const tick = view.tick_ms;
  const windows = view.windows_ms;
  if (tick === undefined || windows === undefined || windows.length === 0) {
    return { kind: "stale" };
  }
  if (nowMs < tick[0]) return { kind: "waiting" };
  if (nowMs < tick[1]) return { kind: "tick" };
  for (let i = 0; i < windows.length; i += 1) {
    const [start, end] = windows[i]!;
    if (nowMs >= start && nowMs < end) return { kind: "cell", cell: i + 1 };
  }
  // Past the last window: this pass is over and the server must be asked
  // for the next one.
  return { kind: "stale" };
}

export function sameHighlight(a: Highlight, b: Highlight): boolean {
  if (a.kind !== b.kind) return false;
  return a.kind !== "cell" || b.kind !== "cell" || a.cell === b.cell;
}

export interface LoopCallbacks {
  /** The lit cell changed (fires once per change, not per frame). */
  onHighlight(h: Highlight): void;
  /** The known pass is exhausted; fetch fresh state for `nowMs`. */
  onStale(nowMs: number): void;
}

type FrameScheduler = (cb: () => void) => number;

const defaultScheduler: FrameScheduler =
  typeof requestAnimationFrame !== "undefined"
    ? (cb) => requestAnimationFrame(() => cb())
    : (cb) => setTimeout(cb, 16) as unknown as number;

/**
 * Drives `activeHighlight` from an animation-frame loop and notifies on
 * changes.  `update` swaps in fresh server state; polling at staleness is
 * delegated to the owner so only one request is in flight.
 */
export class HighlightLoop {
  private view: PassWindows | null = null;
  private last: Highlight = { kind: "idle" };
  private running = false;
  private staleSignalled = false;

  constructor(
    private readonly nowMs: () => number,
    private readonly callbacks: LoopCallbacks,
    private readonly schedule: FrameScheduler = defaultScheduler,
  ) {}

  start(view: PassWindows): void {
    this.view = view;
    this.staleSignalled = false;
    if (!this.running) {
      this.running = true;
      this.schedule(() => this.frame());
    }
  }

  update(view: PassWindows): void {
    this.view = view;
    this.staleSignalled = false;
  }

  stop(): void {
    this.running = false;
    this.view = null;
    this.last = { kind: "idle" };
  }

  /** One frame: resolve, notify on change, re-arm. Exposed for tests. */
  frame(): void {
    if (!this.running) return;
    const now = this.nowMs();
    const h = activeHighlight(this.view, now);
    if (!sameHighlight(h, this.last)) {
      this.last = h;
      this.callbacks.onHighlight(h);
    }
    if (h.kind === "stale" && !this.staleSignalled) {
      this.staleSignalled = true; // one poll per exhausted pass
      this.callbacks.onStale(now);
    }
    if (h.kind === "done") {
      this.running = false;
      return;
    }
    this.schedule(() => this.frame());
  }
}
