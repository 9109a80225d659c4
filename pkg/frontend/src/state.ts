/** Client-side investigation state and the pure transitions over it.
 *
 * Everything here is DOM-free so the invariants can be tested headless:
 * overlay keys stay within the loaded subgraph, the timeline cursor
 * stays inside its fetched range, and replaying the expansion history
 * rebuilds the canvas node set exactly.
 */

import type {
  EdgeOut,
  NodeOut,
  NodeScore,
  SubgraphOut,
  TimelineFrame,
} from "./model.js";

export interface TimelineState {
  frames: TimelineFrame[];
  cursor: number;
}

export interface ViewState {
  query: string;
  domain: string | null;
  hops: number;
  selectedNode: number | null;
  subgraph: SubgraphOut | null;
  overlay: Map<number, number> | null;
  overlayConverged: boolean | null;
  timeline: TimelineState | null;
  expansionHistory: number[];
}

export function emptyState(): ViewState {
  return {
    query: "",
    domain: null,
    hops: 2,
    selectedNode: null,
    subgraph: null,
    overlay: null,
    overlayConverged: null,
    timeline: null,
    expansionHistory: [],
  };
}

const edgeKey = (e: EdgeOut) => `${e.src}:${e.dst}:${e.kind}`;

/** Union of two subgraph payloads without duplicate nodes or edges. */
export function mergeSubgraphs(base: SubgraphOut, extra: SubgraphOut): SubgraphOut {
  const nodes = new Map<number, NodeOut>(base.nodes.map((n) => [n.id, n]));
  for (const n of extra.nodes) {
    if (!nodes.has(n.id)) nodes.set(n.id, n);
  }
  const edges = new Map<string, EdgeOut>(base.edges.map((e) => [edgeKey(e), e]));
  for (const e of extra.edges) {
    if (!edges.has(edgeKey(e))) edges.set(edgeKey(e), e);
  }
  return {
    nodes: [...nodes.values()],
    edges: [...edges.values()],
    truncated: base.truncated || extra.truncated,
  };
}

/** The slice of `fetched` that expanding `target` is allowed to add:
 * the target's direct neighbors plus the edges connecting them to it.
 *
 * The HTTP API addresses subgraphs by domain name, so expanding a
 * non-domain node (an IP, say) is served by fetching a wider
 * neighborhood of an adjacent domain; this filter keeps the expansion
 * semantics exact anyway.
 */
export function expansionSlice(fetched: SubgraphOut, targetId: number): SubgraphOut {
  const wanted = new Set<number>([targetId]);
  const edges: EdgeOut[] = [];
  for (const e of fetched.edges) {
    if (e.src === targetId || e.dst === targetId) {
      wanted.add(e.src);
      wanted.add(e.dst);
      edges.push(e);
    }
  }
  return {
    nodes: fetched.nodes.filter((n) => wanted.has(n.id)),
    edges,
    truncated: fetched.truncated,
  };
}

/** Load a fresh dashboard: new center wipes overlay, timeline, history. */
export function loadDashboard(
  state: ViewState,
  domain: string,
  hops: number,
  subgraph: SubgraphOut,
): ViewState {
  return {
    ...state,
    domain,
    hops,
    selectedNode: null,
    subgraph,
    overlay: null,
    overlayConverged: null,
    timeline: null,
    expansionHistory: [],
  };
}

/** Merge an expansion answer for `targetId` and record it in history. */
export function applyExpansion(
  state: ViewState,
  targetId: number,
  fetched: SubgraphOut,
): { state: ViewState; addedNodes: NodeOut[] } {
  if (state.subgraph === null) {
    throw new Error("no subgraph loaded");
  }
  const before = new Set(state.subgraph.nodes.map((n) => n.id));
  const slice = expansionSlice(fetched, targetId);
  const merged = mergeSubgraphs(state.subgraph, slice);
  const addedNodes = merged.nodes.filter((n) => !before.has(n.id));
  return {
    state: {
      ...state,
      subgraph: merged,
      expansionHistory: [...state.expansionHistory, targetId],
      // scores for the newly added nodes are unknown until re-inference
      overlay: addedNodes.length > 0 ? null : state.overlay,
      overlayConverged: addedNodes.length > 0 ? null : state.overlayConverged,
    },
    addedNodes,
  };
}

/** Replay a recorded expansion history over a fresh base subgraph. */
export function replayExpansions(
  base: SubgraphOut,
  history: number[],
  fetchedByTarget: Map<number, SubgraphOut>,
): SubgraphOut {
  let current = base;
  for (const targetId of history) {
    const fetched = fetchedByTarget.get(targetId);
    if (fetched === undefined) {
      throw new Error(`history references node ${targetId} with no recorded fetch`);
    }
    current = mergeSubgraphs(current, expansionSlice(fetched, targetId));
  }
  return current;
}

/** Attach inference scores; every scored id must be on the canvas. */
export function setOverlay(
  state: ViewState,
  scores: NodeScore[],
  converged: boolean,
): ViewState {
  if (state.subgraph === null) {
    throw new Error("no subgraph loaded");
  }
  const visible = new Set(state.subgraph.nodes.map((n) => n.id));
  const overlay = new Map<number, number>();
  for (const s of scores) {
    if (!visible.has(s.id)) continue;
    overlay.set(s.id, s.score);
  }
  return { ...state, overlay, overlayConverged: converged };
}

export function clearOverlay(state: ViewState): ViewState {
  return { ...state, overlay: null, overlayConverged: null };
}

export function setTimeline(state: ViewState, frames: TimelineFrame[]): ViewState {
  return {
    ...state,
    timeline: frames.length > 0 ? { frames, cursor: 0 } : null,
  };
}

/** Move the scrubber; out-of-range positions clamp to the fetched range. */
export function setTimelineCursor(state: ViewState, cursor: number): ViewState {
  if (state.timeline === null) {
    return state;
  }
  const clamped = Math.min(state.timeline.frames.length - 1, Math.max(0, cursor));
  return { ...state, timeline: { ...state.timeline, cursor: clamped } };
}

export function currentFrame(state: ViewState): TimelineFrame | null {
  if (state.timeline === null) return null;
  return state.timeline.frames[state.timeline.cursor] ?? null;
}

// ------------------------------------------------------------ deep links

export interface Route {
  domain: string | null;
  hops: number;
  day: string | null;
  query: string;
}

export function buildHash(route: Partial<Route>): string {
  if (!route.domain) {
    return route.query ? `#/?q=${encodeURIComponent(route.query)}` : "#/";
  }
  const params = new URLSearchParams();
  if (route.hops !== undefined && route.hops !== 2) params.set("hops", String(route.hops));
  if (route.day) params.set("day", route.day);
  const tail = params.size ? `?${params}` : "";
  return `#/domain/${encodeURIComponent(route.domain)}${tail}`;
}

export function parseHash(hash: string): Route {
  const fallback: Route = { domain: null, hops: 2, day: null, query: "" };
  const text = hash.startsWith("#") ? hash.slice(1) : hash;
  const [path = "", queryText = ""] = text.split("?", 2);
  const params = new URLSearchParams(queryText);
  if (path.startsWith("/domain/")) {
    const domain = decodeURIComponent(path.slice("/domain/".length));
    if (!domain) return fallback;
    const hops = Number(params.get("hops") ?? "2");
    return {
      domain,
      hops: Number.isInteger(hops) && hops >= 0 && hops <= 3 ? hops : 2,
      day: params.get("day"),
      query: "",
    };
  }
  return { ...fallback, query: params.get("q") ?? "" };
}
