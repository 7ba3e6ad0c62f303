import { readFileSync } from "node:fs";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { RawJson } from "../src/literals";

const FIXTURES = fileURLToPath(new URL("./fixtures", import.meta.url));

function fixture(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf8");
}

describe("RawJson", () => {
  it("returns the exact source bytes of each scalar", () => {
    const raw = new RawJson('{"a": 2.0, "b": [1e-3, "x,\\"y"], "c": {"d": null}}');
    expect(raw.literal("a")).toBe("2.0");
    expect(raw.literal("b.0")).toBe("1e-3");
    expect(raw.literal("b.1")).toBe('"x,\\"y"');
    expect(raw.literal("c.d")).toBe("null");
    expect(raw.literal("missing")).toBeUndefined();
  });

  it("keeps float renderings the platform would not reproduce", () => {
    // JSON.stringify(2.0) gives "2" — the server's "2.0" must survive.
    const raw = new RawJson('{"cpc": 2.0, "count": 9, "noisy": 4.800000000000001}');
    expect(raw.literal("cpc")).toBe("2.0");
    expect(JSON.stringify(raw.get("cpc"))).toBe("2");
    expect(raw.literal("count")).toBe("9");
    expect(raw.literal("noisy")).toBe("4.800000000000001");
  });

  it("handles whitespace, nesting, and empty containers", () => {
    const raw = new RawJson('  {\n  "a" : [ ] ,\t"b": { }, "c": [ {"d": true} ]\n}  ');
    expect(raw.paths()).toEqual(["c.0.d"]);
    expect(raw.get("c.0.d")).toBe(true);
  });

  it("rejects malformed bodies", () => {
    expect(() => new RawJson('{"a": 1,}')).toThrow();
    expect(() => new RawJson('{"a": 1} trailing')).toThrow();
  });

  for (const name of [
    "layouts.json",
    "session_created.json",
    "click_accepted.json",
    "state_mid.json",
    "stats_noiseless.json",
    "stats_noisy.json",
    "stats_unavailable.json",
  ]) {
    it(`round-trips every scalar of ${name}`, () => {
      const text = fixture(name);
      const raw = new RawJson(text);
      const paths = raw.paths();
      expect(paths.length).toBeGreaterThan(0);
      for (const path of paths) {
        const span = raw.span(path)!;
        const literal = raw.literal(path)!;
        // the literal is a verbatim slice of the body …
        expect(text.slice(span.start, span.end)).toBe(literal);
        // … and parses back to the value JSON.parse sees at that path.
        expect(JSON.parse(literal)).toEqual(valueAt(JSON.parse(text), path));
      }
    });
  }
});

function valueAt(data: unknown, path: string): unknown {
  let node: unknown = data;
  for (const step of path.split(".")) {
    if (Array.isArray(node)) node = node[Number(step)];
    else node = (node as Record<string, unknown>)[step];
  }
  return node;
}
