/** Application wiring: hash routing, fetch orchestration, event handlers.
 *
 * State transitions live in state.ts and stay pure; this module owns
 * the fetch lifecycle and pushes results through those transitions
 * before repainting.
 */

import { ApiClient, ApiError, isAbort } from "./api.js";
import { formatScore, scoreColor } from "./color.js";
import { apiBase } from "./config.js";
import { GraphLayout } from "./graph.js";
import type { NodeOut, NodeScore, SubgraphOut } from "./model.js";
import {
  applyExpansion,
  buildHash,
  clearOverlay,
  currentFrame,
  emptyState,
  loadDashboard,
  parseHash,
  setOverlay,
  setTimeline,
  setTimelineCursor,
  type ViewState,
} from "./state.js";
import {
  clear,
  renderErrorBanner,
  renderGraph,
  renderLegend,
  renderSearchResults,
  renderSummary,
  renderTruncationNotice,
  showToast,
} from "./render.js";

function must<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const DOMAIN_KINDS = new Set(["apex", "fqdn"]);

class App {
  private state: ViewState = emptyState();
  private layout = new GraphLayout();
  private readonly client = new ApiClient(apiBase() + "/api/v1");
  private readonly expanded = new Set<number>();
  private searchTimer: ReturnType<typeof setTimeout> | null = null;

  private readonly searchView = must<HTMLElement>("search-view");
  private readonly dashboardView = must<HTMLElement>("dashboard-view");
  private readonly searchInput = must<HTMLInputElement>("search-input");
  private readonly searchResults = must<HTMLElement>("search-results");
  private readonly summaryPane = must<HTMLElement>("summary");
  private readonly detailPane = must<HTMLElement>("detail");
  private readonly banner = must<HTMLElement>("banner");
  private readonly truncation = must<HTMLElement>("truncation");
  private readonly legend = must<HTMLElement>("legend");
  private readonly verdictChip = must<HTMLElement>("verdict-chip");
  private readonly canvas = document.getElementById("canvas") as unknown as SVGSVGElement;
  private readonly hopsSelect = must<HTMLSelectElement>("hops-select");
  private readonly timelineBar = must<HTMLElement>("timeline-bar");
  private readonly timelineSlider = must<HTMLInputElement>("timeline-slider");
  private readonly timelineDay = must<HTMLElement>("timeline-day");

  start(): void {
    this.bindChrome();
    this.loadHealth();
    window.addEventListener("hashchange", () => this.route());
    this.route();
  }

  private bindChrome(): void {
    must<HTMLFormElement>("search-form").addEventListener("submit", (ev) => {
      ev.preventDefault();
      const q = this.searchInput.value.trim();
      window.location.hash = buildHash({ query: q });
      this.runSearch(q);
    });
    this.searchInput.addEventListener("input", () => {
      if (this.searchTimer) clearTimeout(this.searchTimer);
      this.searchTimer = setTimeout(() => {
        const q = this.searchInput.value.trim();
        history.replaceState(null, "", buildHash({ query: q }));
        this.runSearch(q);
      }, 250);
    });
    this.hopsSelect.addEventListener("change", () => {
      if (this.state.domain) {
        window.location.hash = buildHash({
          domain: this.state.domain,
          hops: Number(this.hopsSelect.value),
        });
      }
    });
    must<HTMLButtonElement>("infer-btn").addEventListener("click", () => this.runInference());
    must<HTMLButtonElement>("overlay-clear-btn").addEventListener("click", () => {
      this.state = clearOverlay(this.state);
      this.verdictChip.textContent = "";
      this.paintGraph();
    });
    must<HTMLButtonElement>("timeline-btn").addEventListener("click", () => this.loadTimeline());
    must<HTMLButtonElement>("timeline-close").addEventListener("click", () => {
      this.state = setTimeline(this.state, []);
      this.timelineBar.classList.add("hidden");
      this.paintGraph();
    });
    this.timelineSlider.addEventListener("input", () => {
      this.state = setTimelineCursor(this.state, Number(this.timelineSlider.value));
      this.paintGraph();
    });
  }

  private async loadHealth(): Promise<void> {
    const chip = must<HTMLElement>("health-chip");
    try {
      const health = await this.client.health();
      chip.textContent = `${health.nodes} nodes, ${health.edges} edges, latest day ${health.latest_day ?? "none"}`;
    } catch (err) {
      if (isAbort(err)) return;
      chip.textContent = "API unreachable";
      chip.classList.add("unhealthy");
    }
  }

  // -------------------------------------------------------------- routing

  private route(): void {
    const route = parseHash(window.location.hash);
    if (route.domain) {
      this.openDomain(route.domain, route.hops, route.day);
    } else {
      this.searchView.classList.remove("hidden");
      this.dashboardView.classList.add("hidden");
      this.searchInput.value = route.query;
      if (route.query) {
        this.runSearch(route.query);
      } else {
        clear(this.searchResults);
        this.searchResults.appendChild(
          Object.assign(document.createElement("p"), {
            className: "empty-state",
            textContent: "Type a keyword to search observed domains.",
          }),
        );
      }
    }
  }

  private async runSearch(q: string): Promise<void> {
    if (!q) {
      clear(this.searchResults);
      return;
    }
    try {
      const hits = await this.client.search(q);
      renderSearchResults(this.searchResults, hits, (domain) => {
        window.location.hash = buildHash({ domain, hops: 2 });
      });
    } catch (err) {
      if (isAbort(err)) return;
      renderErrorBanner(this.searchResults, this.describe(err), () => this.runSearch(q));
    }
  }

  private async openDomain(domain: string, hops: number, day: string | null): Promise<void> {
    this.searchView.classList.add("hidden");
    this.dashboardView.classList.remove("hidden");
    this.hopsSelect.value = String(hops);
    this.timelineBar.classList.add("hidden");
    this.verdictChip.textContent = "";
    clear(this.banner);
    try {
      const [summary, subgraph] = await Promise.all([
        this.client.summary(domain, day ?? undefined),
        this.client.subgraph(domain, hops, undefined, day ?? undefined),
      ]);
      this.state = loadDashboard(this.state, domain, hops, subgraph);
      this.expanded.clear();
      this.layout = new GraphLayout();
      this.layout.sync(subgraph);
      this.layout.run(200);
      renderSummary(this.summaryPane, summary);
      clear(this.detailPane);
      this.paintGraph();
    } catch (err) {
      if (isAbort(err)) return;
      if (err instanceof ApiError && err.status === 404) {
        renderErrorBanner(this.banner, `No observations for ${domain}.`, () => {
          window.location.hash = buildHash({});
        });
        return;
      }
      renderErrorBanner(this.banner, this.describe(err), () =>
        this.openDomain(domain, hops, day),
      );
    }
  }

  // ------------------------------------------------------------ dashboard

  private paintGraph(): void {
    const frame = currentFrame(this.state);
    const subgraph = frame ? frame.subgraph : this.state.subgraph;
    if (!subgraph) return;
    const overlay = frame ? this.scoresToMap(frame.scores) : this.state.overlay;
    this.layout.sync(subgraph);
    this.layout.run(frame ? 60 : 120);
    renderGraph(this.canvas, subgraph, this.layout, overlay, this.expanded, {
      onSelect: (id) => this.select(id, subgraph, overlay),
      onExpand: (id) => this.expand(id),
    });
    renderLegend(this.legend, frame ? null : this.state.overlayConverged);
    renderTruncationNotice(this.truncation, subgraph.truncated);
    if (frame) {
      this.timelineDay.textContent = frame.day;
    }
  }

  private scoresToMap(scores: NodeScore[] | null): Map<number, number> | null {
    if (!scores) return null;
    return new Map(scores.map((s) => [s.id, s.score]));
  }

  private select(id: number, subgraph: SubgraphOut, overlay: Map<number, number> | null): void {
    this.state = { ...this.state, selectedNode: id };
    const node = subgraph.nodes.find((n) => n.id === id);
    if (!node) return;
    clear(this.detailPane);
    const title = document.createElement("h3");
    title.textContent = node.label;
    this.detailPane.appendChild(title);
    const kind = document.createElement("p");
    kind.textContent = `kind: ${node.kind}`;
    this.detailPane.appendChild(kind);
    const score = overlay?.get(id);
    if (score !== undefined) {
      const line = document.createElement("p");
      line.textContent = `score: ${formatScore(score)}`;
      line.style.color = scoreColor(score);
      this.detailPane.appendChild(line);
    }
    const edges = subgraph.edges.filter((e) => e.src === id || e.dst === id);
    const list = document.createElement("ul");
    for (const e of edges) {
      const otherId = e.src === id ? e.dst : e.src;
      const other = subgraph.nodes.find((n) => n.id === otherId);
      const item = document.createElement("li");
      item.textContent = `${e.kind} ${other ? other.label : otherId} (${e.days.length} days)`;
      list.appendChild(item);
    }
    this.detailPane.appendChild(list);
    if (DOMAIN_KINDS.has(node.kind)) {
      const open = document.createElement("button");
      open.textContent = "Open dashboard";
      open.addEventListener("click", () => {
        window.location.hash = buildHash({ domain: node.label, hops: 2 });
      });
      this.detailPane.appendChild(open);
    }
    const expand = document.createElement("button");
    expand.textContent = "Expand neighbors";
    expand.addEventListener("click", () => this.expand(id));
    this.detailPane.appendChild(expand);
  }

  private async expand(id: number): Promise<void> {
    if (this.state.timeline) {
      showToast("Exit the timeline before expanding nodes.");
      return;
    }
    const subgraph = this.state.subgraph;
    if (!subgraph) return;
    const node = subgraph.nodes.find((n) => n.id === id);
    if (!node) return;
    try {
      const fetched = await this.fetchNeighborhood(node, subgraph);
      if (!fetched) {
        showToast(`No route to expand ${node.label}.`);
        return;
      }
      const hadOverlay = this.state.overlay !== null;
      const { state, addedNodes } = applyExpansion(this.state, id, fetched);
      this.state = state;
      this.expanded.add(id);
      if (addedNodes.length === 0) {
        showToast(`${node.label}: no new neighbors.`);
      } else {
        showToast(`${node.label}: ${addedNodes.length} new node(s).`);
        if (hadOverlay) {
          showToast("Scores cleared; run inference again to cover new nodes.");
          this.verdictChip.textContent = "";
        }
      }
      this.paintGraph();
    } catch (err) {
      if (isAbort(err)) return;
      showToast(this.describe(err));
    }
  }

  /** Fetch a payload whose expansion slice covers `node`'s neighbors.
   *
   * Domains are addressable directly. For anything else, a two-hop
   * neighborhood of any adjacent on-canvas domain contains every edge
   * incident to the target, so fetch through that domain instead.
   */
  private async fetchNeighborhood(
    node: NodeOut,
    subgraph: SubgraphOut,
  ): Promise<SubgraphOut | null> {
    if (DOMAIN_KINDS.has(node.kind)) {
      return this.client.subgraph(node.label, 1);
    }
    const byId = new Map(subgraph.nodes.map((n) => [n.id, n]));
    for (const e of subgraph.edges) {
      if (e.src !== node.id && e.dst !== node.id) continue;
      const other = byId.get(e.src === node.id ? e.dst : e.src);
      if (other && DOMAIN_KINDS.has(other.kind)) {
        return this.client.subgraph(other.label, 2);
      }
    }
    return null;
  }

  private async runInference(): Promise<void> {
    if (!this.state.domain) return;
    try {
      const resp = await this.client.infer({
        domain: this.state.domain,
        hops: this.state.hops,
      });
      this.state = setOverlay(this.state, resp.nodes, resp.converged);
      this.verdictChip.textContent = `${resp.domain}: ${formatScore(resp.score)} ${resp.verdict}`;
      this.verdictChip.style.color = scoreColor(resp.score);
      if (!resp.converged) {
        showToast("Inference hit the iteration cap before settling.");
      }
      this.paintGraph();
    } catch (err) {
      if (isAbort(err)) return;
      showToast(this.describe(err));
    }
  }

  private async loadTimeline(): Promise<void> {
    if (!this.state.domain) return;
    try {
      const frames = await this.client.timeline(this.state.domain, {
        hops: this.state.hops,
        infer: true,
      });
      if (frames.length === 0) {
        showToast("No observed days for this neighborhood.");
        return;
      }
      this.state = setTimeline(this.state, frames);
      this.timelineSlider.max = String(frames.length - 1);
      this.timelineSlider.value = "0";
      this.timelineBar.classList.remove("hidden");
      this.paintGraph();
    } catch (err) {
      if (isAbort(err)) return;
      showToast(this.describe(err));
    }
  }

  private describe(err: unknown): string {
    if (err instanceof ApiError) return `${err.message} (${err.code})`;
    if (err instanceof Error) return err.message;
    return String(err);
  }
}

new App().start();
