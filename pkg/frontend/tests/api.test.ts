import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError, isAbort } from "../src/api.js";

/** fetch stub that honors AbortSignal and answers after a delay */
function fakeFetch(delayMs: number, body: unknown, status = 200) {
  return (_input: RequestInfo | URL, init?: RequestInit) =>
    new Promise<Response>((resolve, reject) => {
      const timer = setTimeout(() => {
        resolve(
          new Response(JSON.stringify(body), {
            status,
            headers: { "content-type": "application/json" },
          }),
        );
      }, delayMs);
      init?.signal?.addEventListener("abort", () => {
        clearTimeout(timer);
        reject(new DOMException("aborted", "AbortError"));
      });
    });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ApiClient cancellation", () => {
  it("a later call of the same action aborts the earlier one", async () => {
    vi.stubGlobal("fetch", fakeFetch(20, []));
    const client = new ApiClient("http://x");
    const first = client.search("pay");
    const second = client.search("paypal");
    await expect(first).rejects.toSatisfy(isAbort);
    await expect(second).resolves.toEqual([]);
  });

  it("different action types run concurrently without cancelling", async () => {
    vi.stubGlobal("fetch", fakeFetch(10, []));
    const client = new ApiClient("http://x");
    const search = client.search("pay");
    const timeline = client.timeline("a.com");
    await expect(search).resolves.toEqual([]);
    await expect(timeline).resolves.toEqual([]);
  });
});

describe("ApiClient errors", () => {
  it("surfaces the service's code and message", async () => {
    vi.stubGlobal("fetch", fakeFetch(1, { code: "not_found", message: "no such domain" }, 404));
    const client = new ApiClient("http://x");
    const err = await client.summary("nope.example").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(404);
    expect(err.code).toBe("not_found");
    expect(err.message).toBe("no such domain");
  });

  it("falls back to a generic message on unparseable errors", async () => {
    vi.stubGlobal("fetch", () =>
      Promise.resolve(new Response("boom", { status: 500 })),
    );
    const client = new ApiClient("http://x");
    const err = await client.health().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("internal");
    expect(err.message).toBe("HTTP 500");
  });

  it("isAbort separates cancellation from real failures", () => {
    expect(isAbort(new DOMException("x", "AbortError"))).toBe(true);
    expect(isAbort(new Error("network down"))).toBe(false);
  });
});
