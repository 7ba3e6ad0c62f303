/**
 * Wire types for the scanning service.  Field names mirror the JSON the
 * service emits; the UI never derives numbers of its own from them.
 */

/** One keyboard grid: row strings plus the control characters they contain. */
export interface LayoutDict {
  name: string;
  rows: string[];
  delete: string;
  terminators: string[];
  tick_prefix: boolean;
}

export interface LayoutsResponse {
  layouts: LayoutDict[];
}

/** Noise and pacing knobs, all times in seconds (library units). */
export interface SessionParams {
  delta?: number;
  sigma?: number;
  f?: number;
  lambda?: number;
  t_scan?: number;
  undo_window?: number;
  error_limit?: number;
  kappa?: number;
}

export interface SessionConfig {
  mode?: "slow" | "fast";
  layout?: string;
  phrase: string;
  seed?: number;
  engine?: "analytic" | "montecarlo";
  latency?: "shifted" | "compensated";
  t_fast?: number;
  params?: SessionParams;
}

export interface CompletedWord {
  word: string;
  outcome: string;
  errors: number;
}

/** A side effect the server applied while advancing to a requested time. */
export type AppliedNote =
  | { kind: "selection"; t_ms: number; phase: string; cell: number; symbol?: string; source: string }
  | { kind: "delete"; t_ms: number; removed: string }
  | { kind: "undo"; t_ms: number; row: number }
  | { kind: "timeout"; t_ms: number; word: string }
  | { kind: "false-positive"; t_ms: number; landed: boolean }
  | { kind: "word-end"; t_ms: number; word: string; outcome: string; errors: number };

/**
 * Snapshot of a session.  The per-word fields are present while a word is
 * live; `windows_ms[i]` is the absolute lit interval of cell `i + 1` in the
 * current group pass and `tick_ms` the leading tick interval.
 */
export interface StateView {
  id: string;
  mode: "slow" | "fast";
  done: boolean;
  word_index: number;
  total_words: number;
  written: string;
  selections: number;
  completed: CompletedWord[];
  word?: string;
  phase?: "row" | "column";
  cell?: number;
  row?: number | null;
  letters_written?: number;
  pending_letters?: number;
  undo_passes?: number | null;
  pass_start_ms?: number;
  word_start_ms?: number;
  tick_ms?: [number, number];
  windows_ms?: [number, number][];
  hops?: number;
  horizon?: number;
  scans?: number;
  time_units?: number;
  applied?: AppliedNote[];
}

export interface Selection {
  phase: string;
  cell: number;
  symbol: string | null;
  source: string;
}

export interface ClickResult {
  effect: "accepted" | "rejected" | "false-positive-injected";
  detail: string;
  selection: Selection | null;
  word_outcome: AppliedNote | null;
  applied: AppliedNote[];
  selections: number;
  state: StateView;
}

export interface SessionInfo {
  id: string;
  mode: "slow" | "fast";
  latency: string;
  engine: string;
  seed: number;
  phrase: string;
  words: string[];
  layout: LayoutDict & { name: string };
  /** Highlight durations of one group pass, in seconds: tick, cell 1, ... */
  schedule: number[];
  unit_delay: number;
  state: StateView;
}
