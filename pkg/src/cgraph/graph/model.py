"""Graph domain types: node/edge taxonomy, subgraphs, timeline frames.

Node identity is (kind, label): the same hostname may exist as an FQDN
vertex and as a NAME_SERVER vertex, which keeps the role taxonomy clean
and lets inference treat every edge uniformly. Node ids are derived from
(kind, label) content, so they are stable across ingestion orders and
across persist/load cycles.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from datetime import date

from cgraph.errors import InvalidRange
from cgraph.ingest.schema import IpEnrichment


class NodeKind(str, enum.Enum):
    APEX = "apex"
    FQDN = "fqdn"
    IP = "ip"
    NAME_SERVER = "name_server"
    MAIL_SERVER = "mail_server"
    CNAME_TARGET = "cname_target"
    SOA = "soa"


class EdgeKind(str, enum.Enum):
    APEX_IP = "apex_ip"
    APEX_FQDN = "apex_fqdn"
    FQDN_IP = "fqdn_ip"
    APEX_NS = "apex_ns"
    FQDN_NS = "fqdn_ns"
    APEX_MX = "apex_mx"
    FQDN_MX = "fqdn_mx"
    APEX_CNAME = "apex_cname"
    FQDN_CNAME = "fqdn_cname"
    APEX_SOA = "apex_soa"
    FQDN_SOA = "fqdn_soa"


# (src kind, dst kind) each edge kind is allowed to connect.
EDGE_ENDPOINT_KINDS: dict[EdgeKind, tuple[NodeKind, NodeKind]] = {
    EdgeKind.APEX_IP: (NodeKind.APEX, NodeKind.IP),
    EdgeKind.APEX_FQDN: (NodeKind.APEX, NodeKind.FQDN),
    EdgeKind.FQDN_IP: (NodeKind.FQDN, NodeKind.IP),
    EdgeKind.APEX_NS: (NodeKind.APEX, NodeKind.NAME_SERVER),
    EdgeKind.FQDN_NS: (NodeKind.FQDN, NodeKind.NAME_SERVER),
    EdgeKind.APEX_MX: (NodeKind.APEX, NodeKind.MAIL_SERVER),
    EdgeKind.FQDN_MX: (NodeKind.FQDN, NodeKind.MAIL_SERVER),
    EdgeKind.APEX_CNAME: (NodeKind.APEX, NodeKind.CNAME_TARGET),
    EdgeKind.FQDN_CNAME: (NodeKind.FQDN, NodeKind.CNAME_TARGET),
    EdgeKind.APEX_SOA: (NodeKind.APEX, NodeKind.SOA),
    EdgeKind.FQDN_SOA: (NodeKind.FQDN, NodeKind.SOA),
}

# Stable ids stay under 2**52 so JSON consumers backed by IEEE doubles
# (the web UI) read them exactly.
_ID_BITS = 52


def stable_node_id(kind: NodeKind, label: str) -> int:
    digest = hashlib.blake2b(
        f"{kind.value}|{label}".encode("utf-8"), digest_size=8
    ).digest()
    return int.from_bytes(digest, "little") & ((1 << _ID_BITS) - 1)


@dataclass(frozen=True)
class Node:
    id: int
    kind: NodeKind
    label: str
    enrichment: IpEnrichment | None = None

    def sort_key(self) -> tuple[str, str]:
        return (self.kind.value, self.label)


@dataclass
class Edge:
    """Undirected observation edge; src/dst order follows the edge kind."""

    src: int
    dst: int
    kind: EdgeKind
    observed_days: set[date] = field(default_factory=set)
    total_count: int = 0

    def key(self) -> tuple[int, int, EdgeKind]:
        return (self.src, self.dst, self.kind)

    def active_in(self, as_of: "DayRange") -> bool:
        return any(as_of.contains(d) for d in self.observed_days)


@dataclass(frozen=True)
class DayRange:
    """Inclusive day range; an unset bound is unbounded."""

    start: date | None = None
    end: date | None = None

    def __post_init__(self):
        if self.start is not None and self.end is not None and self.start > self.end:
            raise InvalidRange(f"inverted range: {self.start} > {self.end}")

    def contains(self, day: date) -> bool:
        if self.start is not None and day < self.start:
            return False
        if self.end is not None and day > self.end:
            return False
        return True

    @classmethod
    def single(cls, day: date) -> "DayRange":
        return cls(start=day, end=day)

    @classmethod
    def full(cls) -> "DayRange":
        return cls()


@dataclass
class Subgraph:
    """Induced neighborhood around a center node for one date range."""

    nodes: list[Node]
    edges: list[Edge]
    center: int
    hops: int
    as_of: DayRange
    truncated: bool = False

    def node_ids(self) -> set[int]:
        return {n.id for n in self.nodes}

    def node_by_id(self, node_id: int) -> Node:
        for node in self.nodes:
            if node.id == node_id:
                return node
        raise KeyError(node_id)


@dataclass
class TimelineFrame:
    """The neighborhood as observed on exactly one day."""

    day: date
    subgraph: Subgraph
