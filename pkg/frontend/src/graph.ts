/** Force-directed placement with position pinning.
 *
 * First layout run settles the whole graph, then pins it; later
 * expansions only move the new arrivals, so the analyst's mental map
 * survives each merge. Deterministic: seeded jitter, fixed iteration
 * counts, no wall-clock dependence.
 */

import type { NodeOut, SubgraphOut } from "./model.js";

export interface PlacedNode extends NodeOut {
  x: number;
  y: number;
  pinned: boolean;
}

interface Spring {
  a: number;
  b: number;
}

/** Small deterministic PRNG so layouts are reproducible. */
function mulberry32(seed: number): () => number {
  let t = seed >>> 0;
  return () => {
    t = (t + 0x6d2b79f5) >>> 0;
    let r = Math.imul(t ^ (t >>> 15), 1 | t);
    r = (r + Math.imul(r ^ (r >>> 7), 61 | r)) ^ r;
    return ((r ^ (r >>> 14)) >>> 0) / 4294967296;
  };
}

export class GraphLayout {
  readonly nodes = new Map<number, PlacedNode>();
  private springs: Spring[] = [];

  constructor(
    public readonly width = 800,
    public readonly height = 600,
  ) {}

  /** Sync with a merged subgraph; unseen nodes spawn near a neighbor. */
  sync(subgraph: SubgraphOut): void {
    const adjacency = new Map<number, number[]>();
    for (const e of subgraph.edges) {
      if (!adjacency.has(e.src)) adjacency.set(e.src, []);
      if (!adjacency.has(e.dst)) adjacency.set(e.dst, []);
      adjacency.get(e.src)!.push(e.dst);
      adjacency.get(e.dst)!.push(e.src);
    }
    for (const n of subgraph.nodes) {
      if (this.nodes.has(n.id)) continue;
      const rand = mulberry32(n.id);
      let x = this.width / 2 + (rand() - 0.5) * this.width * 0.8;
      let y = this.height / 2 + (rand() - 0.5) * this.height * 0.8;
      const anchor = (adjacency.get(n.id) ?? [])
        .map((m) => this.nodes.get(m))
        .find((m) => m !== undefined);
      if (anchor) {
        x = anchor.x + (rand() - 0.5) * 120;
        y = anchor.y + (rand() - 0.5) * 120;
      }
      this.nodes.set(n.id, { ...n, x, y, pinned: false });
    }
    const present = new Set(subgraph.nodes.map((n) => n.id));
    for (const id of [...this.nodes.keys()]) {
      if (!present.has(id)) this.nodes.delete(id);
    }
    this.springs = subgraph.edges
      .filter((e) => present.has(e.src) && present.has(e.dst))
      .map((e) => ({ a: e.src, b: e.dst }));
  }

  /** Run the spring embedder; pinned nodes stay put. */
  run(iterations = 150): void {
    const free = [...this.nodes.values()].filter((n) => !n.pinned);
    if (free.length === 0) return;
    const all = [...this.nodes.values()];
    const area = this.width * this.height;
    const k = Math.sqrt(area / Math.max(1, all.length));
    for (let it = 0; it < iterations; it++) {
      const temp = (this.width / 10) * (1 - it / iterations) + 1;
      const disp = new Map<number, { dx: number; dy: number }>(
        free.map((n) => [n.id, { dx: 0, dy: 0 }]),
      );
      for (const v of free) {
        const d = disp.get(v.id)!;
        for (const u of all) {
          if (u.id === v.id) continue;
          let dx = v.x - u.x;
          let dy = v.y - u.y;
          let dist = Math.hypot(dx, dy);
          if (dist < 0.01) {
            const rand = mulberry32(v.id ^ u.id);
            dx = rand() - 0.5;
            dy = rand() - 0.5;
            dist = Math.hypot(dx, dy);
          }
          const force = (k * k) / dist;
          d.dx += (dx / dist) * force;
          d.dy += (dy / dist) * force;
        }
      }
      for (const s of this.springs) {
        const a = this.nodes.get(s.a);
        const b = this.nodes.get(s.b);
        if (!a || !b) continue;
        const dx = a.x - b.x;
        const dy = a.y - b.y;
        const dist = Math.max(0.01, Math.hypot(dx, dy));
        const force = (dist * dist) / k;
        const fx = (dx / dist) * force;
        const fy = (dy / dist) * force;
        const da = disp.get(a.id);
        if (da) {
          da.dx -= fx;
          da.dy -= fy;
        }
        const db = disp.get(b.id);
        if (db) {
          db.dx += fx;
          db.dy += fy;
        }
      }
      for (const v of free) {
        const d = disp.get(v.id)!;
        const len = Math.max(0.01, Math.hypot(d.dx, d.dy));
        v.x += (d.dx / len) * Math.min(len, temp);
        v.y += (d.dy / len) * Math.min(len, temp);
        v.x = Math.min(this.width - 20, Math.max(20, v.x));
        v.y = Math.min(this.height - 20, Math.max(20, v.y));
      }
    }
    for (const n of free) {
      n.pinned = true;
    }
  }

  positionOf(id: number): { x: number; y: number } | null {
    const n = this.nodes.get(id);
    return n ? { x: n.x, y: n.y } : null;
  }
}
