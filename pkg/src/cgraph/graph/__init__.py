"""Day-granular heterogeneous knowledge graph: model, store, persistence."""

from cgraph.graph.model import (
    DayRange,
    Edge,
    EdgeKind,
    Node,
    NodeKind,
    Subgraph,
    TimelineFrame,
    stable_node_id,
)
from cgraph.graph.store import GraphStore, SearchHit, UpsertResult
from cgraph.graph.persistence import append_records_to_log, load_store, save_store

__all__ = [
    "NodeKind",
    "EdgeKind",
    "Node",
    "Edge",
    "Subgraph",
    "TimelineFrame",
    "DayRange",
    "stable_node_id",
    "GraphStore",
    "SearchHit",
    "UpsertResult",
    "save_store",
    "load_store",
    "append_records_to_log",
]
