/**
 * Byte-exact access to a JSON response body.
 *
 * Every statistic on screen must be the server's own rendering of the
 * number, so instead of re-serialising parsed floats the panel displays
 * the literal token sliced out of the response text.  This scanner walks
 * the body once and records the [start, end) span of every scalar, keyed
 * by its path ("empirical.wpm", "analytic.per_word.0.scans.mean", ...).
 */

export interface LiteralSpan {
  start: number;
  end: number;
}

const WS = new Set([" ", "\t", "\n", "\r"]);
const NUMBER_RE = /-?(?:0|[1-9]\d*)(?:\.\d+)?(?:[eE][+-]?\d+)?/y;

export class RawJson {
  /** The body parsed normally, for non-display logic. */
  readonly data: unknown;
  private readonly spans = new Map<string, LiteralSpan>();

  constructor(readonly text: string) {
    this.data = JSON.parse(text);
    const end = this.scanValue(this.skipWs(0), "");
    if (this.skipWs(end) !== text.length) {
      throw new Error("trailing content after the JSON body");
    }
  }

  /** The exact source bytes of the scalar at `path`, or undefined. */
  literal(path: string): string | undefined {
    const span = this.spans.get(path);
    return span === undefined ? undefined : this.text.slice(span.start, span.end);
  }

  span(path: string): LiteralSpan | undefined {
    return this.spans.get(path);
  }

  /** The parsed value at `path` (scalars only), or undefined. */
  get(path: string): unknown {
    const lit = this.literal(path);
    return lit === undefined ? undefined : JSON.parse(lit);
  }

  has(path: string): boolean {
    return this.spans.has(path);
  }

  /** All scalar paths, optionally restricted to a prefix. */
  paths(prefix = ""): string[] {
    const all = [...this.spans.keys()];
    return prefix === "" ? all : all.filter((p) => p === prefix || p.startsWith(prefix + "."));
  }

  // -- scanning ------------------------------------------------------------

  private skipWs(pos: number): number {
    while (pos < this.text.length && WS.has(this.text[pos]!)) pos += 1;
    return pos;
  }

  /** Scan one value starting at `pos`; record scalars; return the end index. */
  private scanValue(pos: number, path: string): number {
    const c = this.text[pos];
    if (c === "{") return this.scanObject(pos, path);
    if (c === "[") return this.scanArray(pos, path);
    const end = this.scanScalar(pos);
    this.spans.set(path, { start: pos, end });
    return end;
  }

  private scanObject(pos: number, path: string): number {
    pos = this.skipWs(pos + 1);
    if (this.text[pos] === "}") return pos + 1;
    for (;;) {
      const keyEnd = this.scanString(pos);
      const key = JSON.parse(this.text.slice(pos, keyEnd)) as string;
      pos = this.skipWs(keyEnd);
      if (this.text[pos] !== ":") throw new Error(`expected ':' at ${pos}`);
      pos = this.scanValue(this.skipWs(pos + 1), path === "" ? key : `${path}.${key}`);
      pos = this.skipWs(pos);
      if (this.text[pos] === ",") {
        pos = this.skipWs(pos + 1);
        continue;
      }
      if (this.text[pos] === "}") return pos + 1;
      throw new Error(`expected ',' or '}' at ${pos}`);
    }
  }

  private scanArray(pos: number, path: string): number {
    pos = this.skipWs(pos + 1);
    if (this.text[pos] === "]") return pos + 1;
    let index = 0;
    for (;;) {
      pos = this.scanValue(pos, `${path}.${index}`);
      index += 1;
      pos = this.skipWs(pos);
      if (this.text[pos] === ",") {
        pos = this.skipWs(pos + 1);
        continue;
      }
      if (this.text[pos] === "]") return pos + 1;
      throw new Error(`expected ',' or ']' at ${pos}`);
    }
  }

  private scanScalar(pos: number): number {
    const c = this.text[pos];
    if (c === '"') return this.scanString(pos);
    for (const word of ["true", "false", "null"]) {
      if (this.text.startsWith(word, pos)) return pos + word.length;
    }
    NUMBER_RE.lastIndex = pos;
    const m = NUMBER_RE.exec(this.text);
    if (m === null) throw new Error(`unrecognised JSON value at ${pos}`);
    return pos + m[0].length;
  }

  private scanString(pos: number): number {
    if (this.text[pos] !== '"') throw new Error(`expected '"' at ${pos}`);
    let i = pos + 1;
    while (i < this.text.length) {
      const c = this.text[i];
      if (c === "\\") {
        i += 2;
        continue;
      }
      if (c === '"') return i + 1;
      i += 1;
    }
    throw new Error("unterminated string");
  }
}
