"""Real-time scoring of a single domain.

Pulls the query domain's k-hop neighborhood out of the store (two hops
by default), runs belief propagation with the current seed labels, and
packages the query node's own score with a verdict.
"""

from dataclasses import dataclass

from cgraph.errors import NodeNotFound
from cgraph.graph.model import DayRange, Node, Subgraph
from cgraph.graph.store import DEFAULT_MAX_NODES, GraphStore
from cgraph.inference.bp import BpParams, InferenceResult, Verdict, classify, run_bp
from cgraph.ingest.seeds import SeedSet

DEFAULT_HOPS = 2


@dataclass(frozen=True)
class DomainInference:
    """Scoring outcome for one queried domain."""

    domain: str
    node: Node
    score: float
    verdict: Verdict
    result: InferenceResult
    subgraph: Subgraph


def infer_domain(
    store: GraphStore,
    domain: str,
    seeds: SeedSet,
    params: BpParams | None = None,
    as_of: DayRange | None = None,
    hops: int = DEFAULT_HOPS,
    max_nodes: int = DEFAULT_MAX_NODES,
    threshold: float = 0.5,
) -> DomainInference:
    """Score one domain from its k-hop neighborhood.

    The name resolves to an APEX vertex first, then FQDN. Raises
    NodeNotFound when the store has never seen the domain.
    """
    node = store.find_domain(domain)
    if node is None:
        raise NodeNotFound(f"domain {domain!r} is not in the graph")
    subgraph = store.k_hop_subgraph((node.kind, node.label), hops, as_of, max_nodes)
    result = run_bp(subgraph, seeds, params)
    score = result.scores[node.id]
    return DomainInference(
        domain=domain,
        node=node,
        score=score,
        verdict=classify(score, threshold),
        result=result,
        subgraph=subgraph,
    )
