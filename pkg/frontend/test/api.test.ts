import { describe, expect, it } from "vitest";
import { ApiError, ClickQueue, ScanApi, type FetchLike } from "../src/api";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("ScanApi.click", () => {
  it("retries a network failure with the identical request", async () => {
    const bodies: string[] = [];
    let attempts = 0;
    const fetchFn: FetchLike = async (_url, init) => {
      attempts += 1;
      bodies.push(String(init?.body));
      if (attempts === 1) throw new TypeError("network down");
      return jsonResponse({ effect: "accepted" });
    };
    const api = new ScanApi("", fetchFn);
    const result = await api.click("sid", 1500.25);
    expect(result.effect).toBe("accepted");
    expect(attempts).toBe(2);
    // same timestamp AND same idempotency token on the wire both times
    expect(bodies[0]).toBe(bodies[1]);
    expect(JSON.parse(bodies[0]!)).toMatchObject({ t_ms: 1500.25 });
    expect(typeof JSON.parse(bodies[0]!).token).toBe("string");
  });

  it("gives up after repeated network failures", async () => {
    const api = new ScanApi("", async () => {
      throw new TypeError("still down");
    });
    await expect(api.click("sid", 1)).rejects.toThrow("still down");
  });

  it("surfaces the service's error detail without retrying", async () => {
    let attempts = 0;
    const api = new ScanApi("", async () => {
      attempts += 1;
      return jsonResponse({ detail: "the session has already finished" }, 409);
    });
    await expect(api.click("sid", 1)).rejects.toThrow(
      "HTTP 409: the session has already finished",
    );
    expect(attempts).toBe(1);
  });
});

describe("ScanApi.statsRaw", () => {
  it("returns the body as raw text, bytes untouched", async () => {
    const text = '{"empirical":{"cpc":2.0}}';
    const api = new ScanApi("", async () => new Response(text, { status: 200 }));
    expect(await api.statsRaw("sid")).toBe(text);
  });

  it("maps 'no completed word yet' (422) to null", async () => {
    const api = new ScanApi("", async () => jsonResponse({ detail: "no word" }, 422));
    expect(await api.statsRaw("sid")).toBeNull();
  });

  it("raises ApiError for other failures", async () => {
    const api = new ScanApi("", async () => jsonResponse({ detail: "gone" }, 404));
    await expect(api.statsRaw("sid")).rejects.toBeInstanceOf(ApiError);
  });
});

describe("ClickQueue", () => {
  it("keeps at most one click request in flight", async () => {
    let inFlight = 0;
    let peak = 0;
    const order: number[] = [];
    const fetchFn: FetchLike = async (_url, init) => {
      inFlight += 1;
      peak = Math.max(peak, inFlight);
      order.push((JSON.parse(String(init?.body)) as { t_ms: number }).t_ms);
      await new Promise((resolve) => setTimeout(resolve, 5));
      inFlight -= 1;
      return jsonResponse({ effect: "accepted" });
    };
    const queue = new ClickQueue(new ScanApi("", fetchFn), "sid");
    await Promise.all([queue.send(100), queue.send(200), queue.send(300)]);
    expect(peak).toBe(1);
    expect(order).toEqual([100, 200, 300]);
  });

  it("keeps accepting clicks after one fails", async () => {
    let attempts = 0;
    const fetchFn: FetchLike = async () => {
      attempts += 1;
      if (attempts === 1) return jsonResponse({ detail: "bad" }, 400);
      return jsonResponse({ effect: "accepted" });
    };
    const queue = new ClickQueue(new ScanApi("", fetchFn), "sid");
    await expect(queue.send(1)).rejects.toBeInstanceOf(ApiError);
    await expect(queue.send(2)).resolves.toMatchObject({ effect: "accepted" });
  });
});
