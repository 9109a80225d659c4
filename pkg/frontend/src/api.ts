/** Typed client for the /api/v1 endpoints.
 *
 * Each action type holds at most one in-flight request: starting a new
 * search aborts the previous search, and so on, so a fast-typing
 * analyst never sees stale answers land on top of fresh ones.
 */

import type {
  DomainSummary,
  HealthResponse,
  InferRequest,
  InferResponse,
  ScoreResponse,
  SearchResult,
  SubgraphOut,
  TimelineFrame,
} from "./model.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** True when the failure is a cancelled fetch rather than a bad answer. */
export function isAbort(err: unknown): boolean {
  return err instanceof DOMException && err.name === "AbortError";
}

type Action = "search" | "summary" | "subgraph" | "infer" | "score" | "timeline" | "health";

export class ApiClient {
  private readonly inflight = new Map<Action, AbortController>();

  constructor(public readonly base: string) {}

  private async request<T>(action: Action, path: string, init?: RequestInit): Promise<T> {
    this.inflight.get(action)?.abort();
    const controller = new AbortController();
    this.inflight.set(action, controller);
    try {
      const resp = await fetch(this.base + path, { ...init, signal: controller.signal });
      let body: unknown = null;
      try {
        body = await resp.json();
      } catch {
        body = null;
      }
      if (!resp.ok) {
        const err = body as { code?: string; message?: string } | null;
        throw new ApiError(
          resp.status,
          err?.code ?? "internal",
          err?.message ?? `HTTP ${resp.status}`,
        );
      }
      return body as T;
    } finally {
      if (this.inflight.get(action) === controller) {
        this.inflight.delete(action);
      }
    }
  }

  health(): Promise<HealthResponse> {
    return this.request("health", "/health");
  }

  search(q: string, limit = 25): Promise<SearchResult[]> {
    const params = new URLSearchParams({ q, limit: String(limit) });
    return this.request("search", `/search?${params}`);
  }

  summary(name: string, day?: string): Promise<DomainSummary> {
    const params = new URLSearchParams(day ? { day } : {});
    const tail = params.size ? `?${params}` : "";
    return this.request("summary", `/domains/${encodeURIComponent(name)}${tail}`);
  }

  subgraph(name: string, hops = 2, from?: string, to?: string): Promise<SubgraphOut> {
    const params = new URLSearchParams({ hops: String(hops) });
    if (from) params.set("from", from);
    if (to) params.set("to", to);
    return this.request("subgraph", `/domains/${encodeURIComponent(name)}/subgraph?${params}`);
  }

  infer(req: InferRequest): Promise<InferResponse> {
    return this.request("infer", "/infer", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    });
  }

  score(name: string): Promise<ScoreResponse> {
    return this.request("score", `/score/${encodeURIComponent(name)}`);
  }

  timeline(
    name: string,
    opts: { hops?: number; from?: string; to?: string; infer?: boolean } = {},
  ): Promise<TimelineFrame[]> {
    const params = new URLSearchParams({ hops: String(opts.hops ?? 2) });
    if (opts.from) params.set("from", opts.from);
    if (opts.to) params.set("to", opts.to);
    if (opts.infer) params.set("infer", "true");
    return this.request("timeline", `/domains/${encodeURIComponent(name)}/timeline?${params}`);
  }
}
