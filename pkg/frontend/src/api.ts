/**
 * HTTP client for the scanning service.  The UI talks to the service and
 * to nothing else; responses that feed the stats panel are kept as raw
 * text so the panel can show the server's own bytes.
 */

import type {
  ClickResult,
  LayoutsResponse,
  SessionConfig,
  SessionInfo,
  StateView,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

async function fail(response: Response): Promise<never> {
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { detail?: string };
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // keep the status text
  }
  throw new ApiError(response.status, detail);
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ScanApi {
  constructor(
    readonly base = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(this.base + path);
    if (!response.ok) await fail(response);
    return (await response.json()) as T;
  }

  async health(): Promise<boolean> {
    try {
      const response = await this.fetchFn(this.base + "/healthz");
      return response.ok;
    } catch {
      return false;
    }
  }

  layouts(): Promise<LayoutsResponse> {
    return this.getJson("/layouts");
  }

  async createSession(config: SessionConfig): Promise<SessionInfo> {
    const response = await this.fetchFn(this.base + "/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(config),
    });
    if (!response.ok) await fail(response);
    return (await response.json()) as SessionInfo;
  }

  /**
   * Register a switch click at session time `tMs` (milliseconds).
   *
   * A network failure is retried with the same timestamp and token — the
   * timestamp keys the click on the server, so a retry is a no-op when the
   * first attempt actually landed.
   */
  async click(sid: string, tMs: number, token?: string): Promise<ClickResult> {
    const body = JSON.stringify({ t_ms: tMs, token: token ?? newToken() });
    let lastError: unknown;
    for (let attempt = 0; attempt < 3; attempt += 1) {
      let response: Response;
      try {
        response = await this.fetchFn(`${this.base}/sessions/${sid}/click`, {
          method: "POST",
          headers: { "Content-Type": "application/json" },
          body,
        });
      } catch (error) {
        lastError = error; // network failure: retry the identical request
        continue;
      }
      if (!response.ok) await fail(response);
      return (await response.json()) as ClickResult;
    }
    throw lastError;
  }

  /** Advance the session clock to `tMs` (if given) and fetch the view. */
  state(sid: string, tMs?: number): Promise<StateView> {
    const query = tMs === undefined ? "" : `?t_ms=${tMs}`;
    return this.getJson(`/sessions/${sid}/state${query}`);
  }

  /**
   * The stats body as raw text (display authority), or null while no word
   * has been completed yet.
   */
  async statsRaw(sid: string): Promise<string | null> {
    const response = await this.fetchFn(`${this.base}/sessions/${sid}/stats`);
    if (response.status === 422) return null;
    if (!response.ok) await fail(response);
    return await response.text();
  }

  async logText(sid: string): Promise<string> {
    const response = await this.fetchFn(`${this.base}/sessions/${sid}/log`);
    if (!response.ok) await fail(response);
    return await response.text();
  }
}

function newToken(): string {
  if (typeof crypto !== "undefined" && "randomUUID" in crypto) {
    return crypto.randomUUID();
  }
  return Math.random().toString(36).slice(2);
}

/**
 * Serialises clicks: at most one in-flight request per session, later
 * clicks queueing behind the earlier ones in timestamp order.
 */
export class ClickQueue {
  private tail: Promise<unknown> = Promise.resolve();

  constructor(
    private readonly api: ScanApi,
    private readonly sid: string,
  ) {}

  send(tMs: number): Promise<ClickResult> {
    const next = this.tail.then(
      () => this.api.click(this.sid, tMs),
      () => this.api.click(this.sid, tMs),
    );
    this.tail = next.catch(() => undefined);
    return next;
  }
}
