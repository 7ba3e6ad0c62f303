/**
 * Stats panel: empirical session totals next to the model's predictions.
 *
 * The panel performs no computation — every statistic it shows is the
 * literal byte sequence the service sent, sliced from the raw response
 * body by `RawJson`.  Dashes mark placeholders (null or absent values),
 * which are the only texts not taken verbatim from the wire.
 */

import { RawJson } from "./literals";

export interface StatRow {
  label: string;
  path: string;
  /** Server bytes, or a placeholder dash. */
  text: string;
  placeholder: boolean;
}

export interface StatPair {
  label: string;
  empirical: StatRow;
  analytic: StatRow | null;
}

export interface PerWordRow {
  word: string;
  cells: StatRow[];
}

export interface StatsViewModel {
  pairs: StatPair[];
  counts: StatRow[];
  perWord: PerWordRow[];
  /** Set when the service marked the prediction unavailable. */
  unavailableReason: string | null;
}

const PLACEHOLDER = "—";

function row(raw: RawJson, label: string, path: string): StatRow {
  const literal = raw.literal(path);
  if (literal === undefined || literal === "null") {
    return { label, path, text: PLACEHOLDER, placeholder: true };
  }
  return { label, path, text: literal, placeholder: false };
}

/** Build the display model from the raw bytes of a stats response. */
export function statsView(raw: RawJson): StatsViewModel {
  const available = raw.get("analytic.available") === true;
  const analyticRow = (label: string, path: string): StatRow | null =>
    available ? row(raw, label, `analytic.${path}`) : null;

  const pairs: StatPair[] = [
    { label: "words / min", empirical: row(raw, "words / min", "empirical.wpm"), analytic: analyticRow("words / min", "wpm") },
    { label: "clicks / char", empirical: row(raw, "clicks / char", "empirical.cpc"), analytic: analyticRow("clicks / char", "cpc") },
    { label: "char error rate", empirical: row(raw, "char error rate", "empirical.cer"), analytic: analyticRow("char error rate", "cer") },
    { label: "word failure rate", empirical: row(raw, "word failure rate", "empirical.p_fail"), analytic: analyticRow("word failure rate", "p_fail") },
    { label: "scans", empirical: row(raw, "scans", "empirical.scans"), analytic: analyticRow("scans", "scans_mean") },
    { label: "seconds", empirical: row(raw, "seconds", "empirical.seconds"), analytic: analyticRow("seconds", "seconds_mean") },
  ];

  const counts: StatRow[] = [
    row(raw, "words", "empirical.words"),
    row(raw, "chars", "empirical.chars"),
    row(raw, "clicks", "empirical.clicks"),
    row(raw, "errors", "empirical.errors"),
  ];

  const perWord: PerWordRow[] = [];
  for (let i = 0; available; i += 1) {
    const base = `analytic.per_word.${i}`;
    if (!raw.has(`${base}.word`)) break;
    perWord.push({
      word: String(raw.get(`${base}.word`)),
      cells: [
        row(raw, "scans mean", `${base}.scans.mean`),
        row(raw, "scans std", `${base}.scans.std`),
        row(raw, "min scans", `${base}.scans.min`),
        row(raw, "clicks mean", `${base}.clicks.mean`),
        row(raw, "errors mean", `${base}.errors.mean`),
        row(raw, "p(correct)", `${base}.outcomes.correct`),
        row(raw, "p(error)", `${base}.outcomes.error`),
        row(raw, "p(failure)", `${base}.outcomes.failure`),
      ],
    });
  }

  const reason = available ? null : raw.get("analytic.reason");
  return {
    pairs,
    counts,
    perWord,
    unavailableReason: typeof reason === "string" ? reason : available ? null : "prediction unavailable",
  };
}

/** Every row of the model, for wiring and for the contract tests. */
export function allRows(model: StatsViewModel): StatRow[] {
  const rows: StatRow[] = [];
  for (const pair of model.pairs) {
    rows.push(pair.empirical);
    if (pair.analytic !== null) rows.push(pair.analytic);
  }
  rows.push(...model.counts);
  for (const word of model.perWord) rows.push(...word.cells);
  return rows;
}

/** Renders the model; cells get the server bytes as their text content. */
export class StatsPanel {
  constructor(private readonly root: HTMLElement) {}

  /** `rawText` is the stats body; null means no completed word yet. */
  renderRaw(rawText: string | null): void {
    this.root.textContent = "";
    if (rawText === null) {
      const note = document.createElement("p");
      note.className = "stats-placeholder";
      note.textContent = "Finish a word to see measured against predicted.";
      this.root.appendChild(note);
      return;
    }
    const model = statsView(new RawJson(rawText));

    const table = document.createElement("table");
    table.className = "stats-table";
    const head = table.insertRow();
    for (const text of ["metric", "measured", "predicted"]) {
      const th = document.createElement("th");
      th.textContent = text;
      head.appendChild(th);
    }
    for (const pair of model.pairs) {
      const tr = table.insertRow();
      tr.insertCell().textContent = pair.label;
      tr.insertCell().textContent = pair.empirical.text;
      tr.insertCell().textContent = pair.analytic === null ? PLACEHOLDER : pair.analytic.text;
    }
    this.root.appendChild(table);

    const countsLine = document.createElement("p");
    countsLine.className = "stats-counts";
    countsLine.textContent = model.counts.map((c) => `${c.label} ${c.text}`).join(" · ");
    this.root.appendChild(countsLine);

    if (model.unavailableReason !== null) {
      const note = document.createElement("p");
      note.className = "stats-unavailable";
      note.textContent = `prediction unavailable: ${model.unavailableReason}`;
      this.root.appendChild(note);
    }

    if (model.perWord.length > 0) {
      const perWord = document.createElement("table");
      perWord.className = "per-word-table";
      const header = perWord.insertRow();
      const first = model.perWord[0]!;
      for (const text of ["word", ...first.cells.map((c) => c.label)]) {
        const th = document.createElement("th");
        th.textContent = text;
        header.appendChild(th);
      }
      for (const entry of model.perWord) {
        const tr = perWord.insertRow();
        tr.insertCell().textContent = entry.word;
        for (const cell of entry.cells) tr.insertCell().textContent = cell.text;
      }
      this.root.appendChild(perWord);
    }
  }
}
