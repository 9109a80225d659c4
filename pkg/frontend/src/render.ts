/** DOM construction for the dashboard panes. Logic-free by design;
 * anything worth testing lives in state.ts / color.ts / graph.ts.
 */

import { formatScore, NEUTRAL_COLOR, scoreColor, THRESHOLD } from "./color.js";
import type { GraphLayout } from "./graph.js";
import type {
  DomainSummary,
  NodeKind,
  SearchResult,
  SubgraphOut,
} from "./model.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const KIND_RADIUS: Record<NodeKind, number> = {
  apex: 14,
  fqdn: 11,
  ip: 12,
  name_server: 10,
  mail_server: 10,
  cname_target: 9,
  soa: 8,
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function clear(target: HTMLElement): void {
  target.replaceChildren();
}

export function showToast(message: string): void {
  const host = document.getElementById("toasts");
  if (!host) return;
  const toast = el("div", "toast", message);
  host.appendChild(toast);
  setTimeout(() => toast.remove(), 4000);
}

export function renderErrorBanner(target: HTMLElement, message: string, onRetry: () => void): void {
  clear(target);
  const banner = el("div", "error-banner");
  banner.appendChild(el("span", "", message));
  const retry = el("button", "", "Retry");
  retry.addEventListener("click", onRetry);
  banner.appendChild(retry);
  target.appendChild(banner);
}

export function renderSearchResults(
  target: HTMLElement,
  results: SearchResult[],
  onOpen: (domain: string) => void,
): void {
  clear(target);
  if (results.length === 0) {
    target.appendChild(el("p", "empty-state", "No domains matched this keyword."));
    return;
  }
  const table = el("table", "results");
  const head = el("tr");
  for (const title of ["Domain", "Kind", "Report positives"]) {
    head.appendChild(el("th", "", title));
  }
  table.appendChild(head);
  for (const hit of results) {
    const row = el("tr", "result-row");
    row.appendChild(el("td", "domain-cell", hit.domain));
    row.appendChild(el("td", "", hit.kind));
    row.appendChild(el("td", "", hit.positives === null ? "-" : String(hit.positives)));
    row.addEventListener("click", () => onOpen(hit.domain));
    table.appendChild(row);
  }
  target.appendChild(table);
}

export function renderSummary(target: HTMLElement, summary: DomainSummary): void {
  clear(target);
  target.appendChild(el("h2", "", summary.domain));
  const chips = el("div", "chips");
  const add = (label: string, value: string) => {
    const chip = el("span", "chip");
    chip.appendChild(el("strong", "", label + " "));
    chip.appendChild(document.createTextNode(value));
    chips.appendChild(chip);
  };
  add("kind", summary.kind);
  add("first seen", summary.first_seen);
  add("last seen", summary.last_seen);
  add("latest rank", summary.latest_rank === null ? "unranked" : `#${summary.latest_rank}`);
  add(
    "report positives",
    summary.latest_positives === null ? "none on file" : String(summary.latest_positives),
  );
  target.appendChild(chips);

  const hosting = el("div", "hosting");
  hosting.appendChild(el("h3", "", "Hosting history"));
  if (summary.hosting_history.length === 0) {
    hosting.appendChild(el("p", "empty-state", "No hosting observed up to this day."));
  } else {
    const table = el("table", "hosting-table");
    const head = el("tr");
    for (const title of ["IP", "First day", "Last day", "ASN", "Country"]) {
      head.appendChild(el("th", "", title));
    }
    table.appendChild(head);
    for (const h of summary.hosting_history) {
      const row = el("tr");
      row.appendChild(el("td", "", h.ip));
      row.appendChild(el("td", "", h.first_day));
      row.appendChild(el("td", "", h.last_day));
      row.appendChild(el("td", "", h.asn === null ? "-" : `AS${h.asn}`));
      row.appendChild(el("td", "", h.country ?? "-"));
      table.appendChild(row);
    }
    hosting.appendChild(table);
  }
  target.appendChild(hosting);
}

export interface CanvasCallbacks {
  onExpand: (nodeId: number) => void;
  onSelect: (nodeId: number) => void;
}

export function renderGraph(
  svg: SVGSVGElement,
  subgraph: SubgraphOut,
  layout: GraphLayout,
  overlay: Map<number, number> | null,
  expanded: Set<number>,
  callbacks: CanvasCallbacks,
): void {
  svg.replaceChildren();
  for (const edge of subgraph.edges) {
    const a = layout.positionOf(edge.src);
    const b = layout.positionOf(edge.dst);
    if (!a || !b) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y));
    line.setAttribute("class", "edge");
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${edge.kind} (${edge.days.length} day${edge.days.length === 1 ? "" : "s"})`;
    line.appendChild(title);
    svg.appendChild(line);
  }
  for (const node of subgraph.nodes) {
    const pos = layout.positionOf(node.id);
    if (!pos) continue;
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("transform", `translate(${pos.x}, ${pos.y})`);
    group.setAttribute("class", expanded.has(node.id) ? "node expanded" : "node expandable");

    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("r", String(KIND_RADIUS[node.kind] ?? 10));
    const score = overlay?.get(node.id);
    circle.setAttribute("fill", score === undefined ? NEUTRAL_COLOR : scoreColor(score));
    circle.setAttribute("data-kind", node.kind);
    group.appendChild(circle);

    const title = document.createElementNS(SVG_NS, "title");
    title.textContent =
      score === undefined ? `${node.label} (${node.kind})` : `${node.label}: ${formatScore(score)}`;
    group.appendChild(title);

    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("y", String((KIND_RADIUS[node.kind] ?? 10) + 12));
    text.textContent = node.label;
    group.appendChild(text);

    group.addEventListener("click", () => callbacks.onSelect(node.id));
    group.addEventListener("dblclick", () => callbacks.onExpand(node.id));
    svg.appendChild(group);
  }
}

export function renderLegend(target: HTMLElement, converged: boolean | null): void {
  clear(target);
  const legend = el("div", "legend");
  const bar = el("div", "legend-bar");
  const stops = 24;
  for (let i = 0; i <= stops; i++) {
    const cell = el("span", "legend-cell");
    cell.style.background = scoreColor(i / stops);
    bar.appendChild(cell);
  }
  legend.appendChild(el("span", "", "benign 0"));
  legend.appendChild(bar);
  legend.appendChild(el("span", "", "1 malicious"));
  legend.appendChild(el("span", "legend-threshold", `verdict line at ${THRESHOLD}`));
  if (converged === false) {
    legend.appendChild(el("span", "warning-chip", "inference did not converge"));
  }
  target.appendChild(legend);
}

export function renderTruncationNotice(target: HTMLElement, truncated: boolean): void {
  clear(target);
  if (truncated) {
    target.appendChild(
      el("p", "truncation-notice", "Neighborhood truncated at the server's node cap."),
    );
  }
}
