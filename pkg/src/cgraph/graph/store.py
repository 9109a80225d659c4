"""In-memory heterogeneous graph store with day-granular edge history.

Writes go through :meth:`GraphStore.upsert_record`; every query method
treats the store as immutable. Under the single-writer/multi-reader
model the service layer publishes a fully-ingested store before serving
queries, so readers never observe a half-applied batch.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import Iterable, Mapping

from cgraph.errors import (
    CgraphError,
    CorruptStore,
    InvalidRange,
    KindConflict,
    NodeNotFound,
)
from cgraph.ingest.apex import PublicSuffixList, bundled_psl
from cgraph.ingest.schema import RRType, IpEnrichment, NormalizedRecord
from cgraph.graph.model import (
    EDGE_ENDPOINT_KINDS,
    DayRange,
    Edge,
    EdgeKind,
    Node,
    NodeKind,
    Subgraph,
    TimelineFrame,
    stable_node_id,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_NODES = 2000

# rrtype -> (target node kind, apex-pivot edge, fqdn-pivot edge)
_EXPANSION = {
    RRType.A: (NodeKind.IP, EdgeKind.APEX_IP, EdgeKind.FQDN_IP),
    RRType.NS: (NodeKind.NAME_SERVER, EdgeKind.APEX_NS, EdgeKind.FQDN_NS),
    RRType.MX: (NodeKind.MAIL_SERVER, EdgeKind.APEX_MX, EdgeKind.FQDN_MX),
    RRType.CNAME: (NodeKind.CNAME_TARGET, EdgeKind.APEX_CNAME, EdgeKind.FQDN_CNAME),
    RRType.SOA: (NodeKind.SOA, EdgeKind.APEX_SOA, EdgeKind.FQDN_SOA),
}


@dataclass
class UpsertResult:
    """Node ids and edge keys materialized or updated by one record."""

    nodes: set[int] = field(default_factory=set)
    edges: set[tuple[int, int, EdgeKind]] = field(default_factory=set)


@dataclass(frozen=True)
class SearchHit:
    domain: str
    kind: NodeKind
    positives: int | None


class GraphStore:
    def __init__(self, psl: PublicSuffixList | None = None):
        self._psl = psl or bundled_psl()
        self._nodes: dict[int, Node] = {}
        self._key_to_id: dict[tuple[NodeKind, str], int] = {}
        self._domain_kind: dict[str, NodeKind] = {}  # APEX/FQDN role guard
        self._edges: dict[tuple[int, int, EdgeKind], Edge] = {}
        self._adj: dict[int, list[Edge]] = {}
        self._enrichment: dict[str, IpEnrichment] = {}
        self.journal: list[NormalizedRecord] = []
        self._min_day: date | None = None
        self._max_day: date | None = None

    # ---------------- write path ----------------

    def _ensure_node(self, kind: NodeKind, label: str) -> Node:
        key = (kind, label)
        node_id = self._key_to_id.get(key)
        if node_id is not None:
            return self._nodes[node_id]
        if kind in (NodeKind.APEX, NodeKind.FQDN):
            existing = self._domain_kind.get(label)
            if existing is not None and existing is not kind:
                raise KindConflict(
                    f"{label!r} already exists as {existing.value}, cannot add as {kind.value}"
                )
            self._domain_kind[label] = kind
        node_id = stable_node_id(kind, label)
        clash = self._nodes.get(node_id)
        if clash is not None:
            raise CgraphError(
                f"node id collision between {(kind.value, label)} and "
                f"{(clash.kind.value, clash.label)}"
            )
        enrichment = self._enrichment.get(label) if kind is NodeKind.IP else None
        node = Node(id=node_id, kind=kind, label=label, enrichment=enrichment)
        self._nodes[node_id] = node
        self._key_to_id[key] = node_id
        self._adj[node_id] = []
        return node

    def _touch_edge(
        self, src: Node, dst: Node, kind: EdgeKind, day: date, count: int
    ) -> tuple[int, int, EdgeKind]:
        expected = EDGE_ENDPOINT_KINDS[kind]
        if (src.kind, dst.kind) != expected:
            raise KindConflict(
                f"edge {kind.value} requires {expected[0].value}->{expected[1].value}, "
                f"got {src.kind.value}->{dst.kind.value}"
            )
        key = (src.id, dst.id, kind)
        edge = self._edges.get(key)
        if edge is None:
            edge = Edge(src=src.id, dst=dst.id, kind=kind)
            self._edges[key] = edge
            self._adj[src.id].append(edge)
            self._adj[dst.id].append(edge)
        edge.observed_days.add(day)
        edge.total_count += count
        if self._min_day is None or day < self._min_day:
            self._min_day = day
        if self._max_day is None or day > self._max_day:
            self._max_day = day
        return key

    def upsert_record(self, rec: NormalizedRecord) -> UpsertResult:
        """Materialize the nodes and edges one record implies.

        A record whose qname is its own apex pivots on the APEX node
        alone; subdomain records add the FQDN vertex plus the APEX_FQDN
        containment edge. Re-ingesting an identical record only
        accumulates total_count.
        """
        result = self._apply_record(rec)
        self.journal.append(rec)
        return result

    def _apply_record(self, rec: NormalizedRecord) -> UpsertResult:
        """Graph mutation without journaling; used by log replay."""
        target_kind, apex_edge, fqdn_edge = _EXPANSION[rec.rrtype]
        apex_label = self._psl.apex_of(rec.qname)
        result = UpsertResult()

        apex = self._ensure_node(NodeKind.APEX, apex_label)
        target = self._ensure_node(target_kind, rec.rdata)
        result.nodes.update((apex.id, target.id))

        if rec.qname == apex_label:
            key = self._touch_edge(apex, target, apex_edge, rec.observed_day, rec.count)
            result.edges.add(key)
        else:
            fqdn = self._ensure_node(NodeKind.FQDN, rec.qname)
            result.nodes.add(fqdn.id)
            containment = self._touch_edge(
                apex, fqdn, EdgeKind.APEX_FQDN, rec.observed_day, rec.count
            )
            resolution = self._touch_edge(
                fqdn, target, fqdn_edge, rec.observed_day, rec.count
            )
            result.edges.update((containment, resolution))

        return result

    def ingest(self, records: Iterable[NormalizedRecord]) -> int:
        n = 0
        for rec in records:
            self.upsert_record(rec)
            n += 1
        return n

    def apply_enrichment(self, enrichments: Iterable[IpEnrichment]) -> int:
        """Attach ASN/geo attributes to current and future IP nodes."""
        n = 0
        for item in enrichments:
            self._enrichment[item.ip] = item
            node_id = self._key_to_id.get((NodeKind.IP, item.ip))
            if node_id is not None:
                old = self._nodes[node_id]
                self._nodes[node_id] = Node(
                    id=old.id, kind=old.kind, label=old.label, enrichment=item
                )
            n += 1
        return n

    # ---------------- snapshot restore ----------------

    def _restore_node(self, node: Node) -> None:
        """Insert a node decoded from a snapshot, bypassing id derivation."""
        key = (node.kind, node.label)
        if node.id in self._nodes or key in self._key_to_id:
            raise CorruptStore(f"duplicate node in snapshot: {key}")
        self._nodes[node.id] = node
        self._key_to_id[key] = node.id
        self._adj[node.id] = []
        if node.kind in (NodeKind.APEX, NodeKind.FQDN):
            self._domain_kind[node.label] = node.kind
        if node.kind is NodeKind.IP and node.enrichment is not None:
            self._enrichment[node.label] = node.enrichment

    def _restore_edge(self, edge: Edge) -> None:
        src = self._nodes.get(edge.src)
        dst = self._nodes.get(edge.dst)
        if src is None or dst is None:
            raise CorruptStore(f"edge {edge.kind.value} references missing node")
        if (src.kind, dst.kind) != EDGE_ENDPOINT_KINDS[edge.kind]:
            raise CorruptStore(
                f"edge {edge.kind.value} has endpoints "
                f"{src.kind.value}->{dst.kind.value}"
            )
        key = edge.key()
        if key in self._edges:
            raise CorruptStore(f"duplicate edge in snapshot: {edge.kind.value}")
        self._edges[key] = edge
        self._adj[edge.src].append(edge)
        self._adj[edge.dst].append(edge)
        for day in edge.observed_days:
            if self._min_day is None or day < self._min_day:
                self._min_day = day
            if self._max_day is None or day > self._max_day:
                self._max_day = day

    # ---------------- lookups ----------------

    def get_node(self, kind: NodeKind, label: str) -> Node | None:
        node_id = self._key_to_id.get((kind, label))
        return self._nodes[node_id] if node_id is not None else None

    def require_node(self, kind: NodeKind, label: str) -> Node:
        node = self.get_node(kind, label)
        if node is None:
            raise NodeNotFound(f"no {kind.value} node labeled {label!r}")
        return node

    def find_domain(self, label: str) -> Node | None:
        """Resolve a domain name to its APEX or FQDN vertex."""
        return self.get_node(NodeKind.APEX, label) or self.get_node(NodeKind.FQDN, label)

    def node_by_id(self, node_id: int) -> Node:
        node = self._nodes.get(node_id)
        if node is None:
            raise NodeNotFound(f"no node with id {node_id}")
        return node

    def incident_edges(self, node_id: int) -> list[Edge]:
        return list(self._adj.get(node_id, ()))

    def all_nodes(self) -> list[Node]:
        return list(self._nodes.values())

    def all_edges(self) -> list[Edge]:
        return list(self._edges.values())

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def latest_day(self) -> date | None:
        return self._max_day

    @property
    def earliest_day(self) -> date | None:
        return self._min_day

    # ---------------- queries ----------------

    def k_hop_subgraph(
        self,
        center: tuple[NodeKind, str],
        k: int,
        as_of: DayRange | None = None,
        max_nodes: int = DEFAULT_MAX_NODES,
    ) -> Subgraph:
        """Breadth-first neighborhood within k undirected hops.

        Only edges observed inside ``as_of`` are walked, and the result
        is the induced subgraph on the visited nodes. Truncation at
        ``max_nodes`` is deterministic: BFS order, with each frontier
        node's neighbors visited in ascending (kind, label) order.
        """
        if k < 0:
            raise ValueError("k must be >= 0")
        window = as_of or DayRange.full()
        center_node = self.require_node(*center)

        visited: dict[int, Node] = {center_node.id: center_node}
        order: list[Node] = [center_node]
        frontier = [center_node.id]
        truncated = False
        for _ in range(k):
            if not frontier or truncated:
                break
            next_frontier: list[int] = []
            for u in frontier:
                candidates: dict[int, Node] = {}
                for edge in self._adj[u]:
                    if not edge.active_in(window):
                        continue
                    other = edge.dst if edge.src == u else edge.src
                    if other not in visited:
                        candidates[other] = self._nodes[other]
                for node in sorted(candidates.values(), key=Node.sort_key):
                    if node.id in visited:
                        continue
                    if len(visited) >= max_nodes:
                        truncated = True
                        break
                    visited[node.id] = node
                    order.append(node)
                    next_frontier.append(node.id)
                if truncated:
                    break
            frontier = next_frontier

        induced: dict[tuple[int, int, EdgeKind], Edge] = {}
        for node_id in visited:
            for edge in self._adj[node_id]:
                other = edge.dst if edge.src == node_id else edge.src
                if other in visited and edge.active_in(window):
                    induced[edge.key()] = edge
        edges = sorted(induced.values(), key=lambda e: (e.src, e.dst, e.kind.value))

        return Subgraph(
            nodes=order,
            edges=edges,
            center=center_node.id,
            hops=k,
            as_of=window,
            truncated=truncated,
        )

    def expand_node(
        self, node: tuple[NodeKind, str], as_of: DayRange | None = None,
        max_nodes: int = DEFAULT_MAX_NODES,
    ) -> Subgraph:
        """Immediate neighbors of one node; the UI's expansion primitive."""
        return self.k_hop_subgraph(node, 1, as_of, max_nodes)

    def search_domains(
        self,
        keyword: str,
        limit: int = 25,
        score_source: Mapping[str, int] | None = None,
    ) -> list[SearchHit]:
        """Case-insensitive substring search over APEX and FQDN labels.

        Results rank by latest known report positives, descending;
        domains without a report sort after those with one; ties break
        lexicographically.
        """
        needle = keyword.strip().lower()
        if not needle:
            return []
        source = score_source or {}
        hits = []
        for label, kind in self._domain_kind.items():
            if needle in label:
                positives = source.get(label)
                hits.append(SearchHit(domain=label, kind=kind, positives=positives))
        hits.sort(key=lambda h: (-(h.positives if h.positives is not None else -1), h.domain))
        return hits[:limit]

    def timeline(
        self,
        center: tuple[NodeKind, str],
        k: int,
        start: date,
        end: date,
        max_nodes: int = DEFAULT_MAX_NODES,
    ) -> list[TimelineFrame]:
        """One induced k-hop frame per day in [start, end]."""
        if start > end:
            raise InvalidRange(f"start {start} after end {end}")
        self.require_node(*center)
        frames = []
        day = start
        while day <= end:
            sub = self.k_hop_subgraph(center, k, DayRange.single(day), max_nodes)
            frames.append(TimelineFrame(day=day, subgraph=sub))
            day += timedelta(days=1)
        return frames
