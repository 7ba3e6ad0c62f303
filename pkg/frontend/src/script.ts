/**
 * Scripted sessions: an automated player that behaves like the model's
 * user — aim for the cell that advances the phrase, click at the middle
 * of its lit window, wait out passes that cannot help (the undo wait).
 *
 * Time is virtual: every timestamp sent to the server is derived from the
 * server's own pass windows, so a scripted run is deterministic for a
 * fixed seed and replays byte-identically.
 */

import { ScanApi } from "./api";
import type { CompletedWord, LayoutDict, SessionConfig, StateView } from "./types";

export type ScriptAction =
  | { kind: "click"; tMs: number }
  | { kind: "wait"; tMs: number };

const EPSILON_MS = 0.5;

function passEndMs(view: StateView): number {
  const windows = view.windows_ms;
  if (windows === undefined || windows.length === 0) {
    throw new Error("the view carries no pass windows");
  }
  return windows[windows.length - 1]![1];
}

/** The symbol the scripted user wants next: pending errors first. */
export function targetSymbol(view: StateView, layout: LayoutDict): string {
  const word = view.word ?? "";
  const typed = view.letters_written ?? 0;
  const pending = view.pending_letters ?? 0;
  if (pending > 0 || typed >= word.length) return layout.delete;
  return word[typed]!;
}

/**
 * Decide the next move for the current pass: click the target's window,
 * or wait out a pass that cannot advance the word (a wrong-row column
 * scan, which is exactly the model's undo wait).
 */
export function nextAction(view: StateView, layout: LayoutDict): ScriptAction {
  const windows = view.windows_ms;
  if (view.done || windows === undefined || windows.length === 0) {
    throw new Error("no live pass to act on");
  }
  const target = targetSymbol(view, layout);
  let cellIndex: number;
  if (view.phase === "row") {
    cellIndex = layout.rows.findIndex((row) => row.includes(target));
  } else {
    const rowText = layout.rows[(view.row ?? 1) - 1] ?? "";
    cellIndex = rowText.indexOf(target);
  }
  if (cellIndex < 0) {
    return { kind: "wait", tMs: passEndMs(view) + EPSILON_MS };
  }
  const window = windows[cellIndex];
  if (window === undefined) {
    return { kind: "wait", tMs: passEndMs(view) + EPSILON_MS };
  }
  return { kind: "click", tMs: (window[0] + window[1]) / 2 };
}

export interface ScriptedReport {
  sessionId: string;
  seed: number;
  done: boolean;
  written: string;
  completed: CompletedWord[];
  clicksSent: number;
  /** Raw bytes of the stats body (null if no word completed). */
  statsRaw: string | null;
  /** Raw bytes of the JSONL log export. */
  logText: string;
}

/**
 * Run a whole session through the service and return the raw result
 * bodies.  `maxSteps` bounds the exchange; the server's scan budget seals
 * words long before it is reached.
 */
export async function runScripted(
  api: ScanApi,
  config: SessionConfig,
  maxSteps = 2000,
): Promise<ScriptedReport> {
  const info = await api.createSession(config);
  const layout = info.layout;
  let view = info.state;
  let clicksSent = 0;

  for (let step = 0; step < maxSteps && !view.done; step += 1) {
    const action = nextAction(view, layout);
    if (action.kind === "wait") {
      view = await api.state(info.id, action.tMs);
      continue;
    }
    const result = await api.click(info.id, action.tMs);
    clicksSent += 1;
    view = result.state;
    if (view.done) break;
    if (result.effect !== "accepted" || info.mode === "fast") {
      // A dropped click spends its dwell, and a fast-mode click only
      // queues: both resolve at the end of the pass the click fell in.
      // When the click was overtaken (a false positive already moved the
      // session to a later pass) there is nothing to wait out — re-aim.
      const tickStart = view.tick_ms?.[0] ?? Number.POSITIVE_INFINITY;
      if (tickStart <= action.tMs) {
        view = await api.state(info.id, passEndMs(view) + EPSILON_MS);
      }
    }
  }

  return {
    sessionId: info.id,
    seed: info.seed,
    done: view.done,
    written: view.written,
    completed: view.completed,
    clicksSent,
    statsRaw: await api.statsRaw(info.id),
    logText: await api.logText(info.id),
  };
}
