/**
 * Contract: the UI computes nothing.  Every statistic the stats panel
 * displays must byte-match the recorded service response it came from —
 * a verbatim slice of the body, never a re-formatted number.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { RawJson } from "../src/literals";
import { allRows, statsView } from "../src/stats";

const FIXTURES = fileURLToPath(new URL("./fixtures", import.meta.url));

function load(name: string): { text: string; raw: RawJson } {
  const text = readFileSync(join(FIXTURES, name), "utf8");
  return { text, raw: new RawJson(text) };
}

const STATS_FIXTURES = ["stats_noiseless.json", "stats_noisy.json", "stats_unavailable.json"];

describe("every displayed statistic byte-matches the recorded response", () => {
  for (const name of STATS_FIXTURES) {
    it(`holds for every row rendered from ${name}`, () => {
      const { text, raw } = load(name);
      const rows = allRows(statsView(raw));
      expect(rows.length).toBeGreaterThan(0);
      let verbatim = 0;
      for (const row of rows) {
        if (row.placeholder) continue; // dashes mark null/absent, by design
        const span = raw.span(row.path);
        expect(span, `${name}: ${row.path} must exist in the body`).toBeDefined();
        expect(
          text.slice(span!.start, span!.end),
          `${name}: displayed "${row.text}" must be the body's own bytes for ${row.path}`,
        ).toBe(row.text);
        verbatim += 1;
      }
      expect(verbatim).toBeGreaterThan(0);
    });
  }

  it("shows server renderings a JavaScript reformat would lose", () => {
    const { raw } = load("stats_noisy.json");
    const rows = allRows(statsView(raw));
    const byPath = new Map(rows.map((row) => [row.path, row.text]));
    // "2.0067850297104615" and friends survive only as verbatim bytes;
    // likewise integer-valued floats keep their ".0".
    expect(byPath.get("analytic.wpm")).toBe("2.0067850297104615");
    expect(byPath.get("empirical.cer")).toBe("1.5");
    expect(byPath.get("empirical.cpc")).toBe("1.0");
    expect(JSON.stringify(1.0)).toBe("1"); // what a recompute would display
  });

  it("covers all phrase-level and per-word statistics of the body", () => {
    const { raw } = load("stats_noiseless.json");
    const shown = new Set(
      allRows(statsView(raw))
        .filter((row) => !row.placeholder)
        .map((row) => row.path),
    );
    for (const path of [
      "empirical.wpm",
      "empirical.cpc",
      "empirical.cer",
      "empirical.p_fail",
      "empirical.scans",
      "empirical.seconds",
      "empirical.words",
      "empirical.chars",
      "empirical.clicks",
      "empirical.errors",
      "analytic.wpm",
      "analytic.cpc",
      "analytic.cer",
      "analytic.p_fail",
      "analytic.scans_mean",
      "analytic.seconds_mean",
      "analytic.per_word.0.scans.mean",
      "analytic.per_word.0.scans.std",
      "analytic.per_word.0.scans.min",
      "analytic.per_word.0.clicks.mean",
      "analytic.per_word.0.errors.mean",
      "analytic.per_word.0.outcomes.correct",
      "analytic.per_word.0.outcomes.error",
      "analytic.per_word.0.outcomes.failure",
    ]) {
      expect(shown.has(path), `the panel must display ${path}`).toBe(true);
    }
  });

  it("marks the prediction unavailable with the server's reason", () => {
    const { raw } = load("stats_unavailable.json");
    const model = statsView(raw);
    expect(model.unavailableReason).toBe(
      "the exact fast-mode recursion does not cover false positives",
    );
    for (const pair of model.pairs) {
      expect(pair.analytic).toBeNull();
      expect(pair.empirical.placeholder).toBe(false);
    }
    expect(model.perWord).toEqual([]);
  });

  it("renders placeholders, not inventions, for null statistics", () => {
    // A body with a null wpm (no time elapsed yet) — placeholder dash only.
    const raw = new RawJson(
      '{"empirical":{"words":1,"chars":1,"scans":2,"clicks":1,"errors":0,' +
        '"seconds":0.0,"wpm":null,"cpc":1.0,"cer":0.0,"p_fail":0.0},' +
        '"analytic":{"available":false,"reason":"r"}}',
    );
    const model = statsView(raw);
    const wpm = model.pairs.find((pair) => pair.label === "words / min")!;
    expect(wpm.empirical.placeholder).toBe(true);
    expect(wpm.empirical.text).toBe("—");
  });
});
