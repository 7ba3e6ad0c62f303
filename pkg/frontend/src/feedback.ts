/**
 * Click feedback and noise indicators: badges for the last click's fate,
 * running counters for injected noise events, and phrase progress.  All
 * counts are tallies of server-reported events, not statistics — the
 * numbers panel stays byte-exact via the stats endpoint.
 */

import type { AppliedNote, ClickResult, StateView } from "./types";

export interface NoiseCounters {
  dropped: number;
  falsePositives: number;
  undos: number;
  deletes: number;
  timeouts: number;
}

export function emptyCounters(): NoiseCounters {
  return { dropped: 0, falsePositives: 0, undos: 0, deletes: 0, timeouts: 0 };
}

/** Fold a batch of server-applied notes into the counters. */
export function tallyNotes(counters: NoiseCounters, notes: AppliedNote[]): void {
  for (const note of notes) {
    if (note.kind === "false-positive") counters.falsePositives += 1;
    else if (note.kind === "undo") counters.undos += 1;
    else if (note.kind === "delete") counters.deletes += 1;
    else if (note.kind === "timeout") counters.timeouts += 1;
  }
}

export function describeClick(result: ClickResult): { badge: string; css: string } {
  if (result.effect === "accepted") {
    const sel = result.selection;
    if (sel !== null && sel.symbol !== null && sel.symbol !== undefined) {
      return { badge: `selected '${sel.symbol}'`, css: "badge-accepted" };
    }
    if (sel !== null && sel.phase === "row") {
      return { badge: `selected row ${sel.cell}`, css: "badge-accepted" };
    }
    return { badge: "click queued", css: "badge-accepted" };
  }
  if (result.effect === "false-positive-injected") {
    return { badge: "false positive fired", css: "badge-fp" };
  }
  return { badge: "missed", css: "badge-missed" };
}

export class FeedbackPanel {
  private readonly counters = emptyCounters();

  constructor(
    private readonly badgeElement: HTMLElement,
    private readonly detailElement: HTMLElement,
    private readonly countersElement: HTMLElement,
    private readonly progressElement: HTMLElement,
  ) {}

  reset(): void {
    Object.assign(this.counters, emptyCounters());
    this.badgeElement.textContent = "";
    this.badgeElement.className = "badge";
    this.detailElement.textContent = "";
    this.countersElement.textContent = "";
    this.progressElement.textContent = "";
  }

  showClick(result: ClickResult): void {
    const { badge, css } = describeClick(result);
    this.badgeElement.textContent = badge;
    this.badgeElement.className = `badge ${css}`;
    this.detailElement.textContent = result.detail;
    if (result.effect === "rejected" && result.detail.includes("dropped")) {
      this.counters.dropped += 1;
    }
    this.applyNotes(result.applied);
  }

  /** Notes that arrived from a poll rather than a click. */
  applyNotes(notes: AppliedNote[]): void {
    tallyNotes(this.counters, notes);
    this.renderCounters();
  }

  showProgress(phrase: string, view: StateView): void {
    const written = view.written;
    const target = phrase.replace(/_/g, " ");
    const matched = commonPrefixLength(target, written);
    this.progressElement.textContent = "";
    const done = document.createElement("span");
    done.className = "progress-done";
    done.textContent = written.slice(0, matched);
    const stray = document.createElement("span");
    stray.className = "progress-stray";
    stray.textContent = written.slice(matched);
    const rest = document.createElement("span");
    rest.className = "progress-rest";
    rest.textContent = target.slice(matched);
    this.progressElement.append(done, stray, rest);
  }

  private renderCounters(): void {
    const c = this.counters;
    const parts = [
      `dropped ${c.dropped}`,
      `false positives ${c.falsePositives}`,
      `undos ${c.undos}`,
      `deletes ${c.deletes}`,
    ];
    if (c.timeouts > 0) parts.push(`timeouts ${c.timeouts}`);
    this.countersElement.textContent = parts.join(" · ");
  }
}

export function commonPrefixLength(a: string, b: string): number {
  let i = 0;
  while (i < a.length && i < b.length && a[i] === b[i]) i += 1;
  return i;
}
