"""Exact marginals by brute-force enumeration.

Validation oracle for the message-passing engine: enumerates every
joint label assignment of a small subgraph, weights it by the product
of node priors and pairwise potentials, and sums out exact single-node
marginals. Deliberately shares no computation route with bp.py; the
prior and potential rules are restated inline.
"""

import numpy as np

from cgraph.errors import EmptySubgraph, TooLarge
from cgraph.graph.model import Subgraph
from cgraph.ingest.seeds import SeedSet
from cgraph.inference.bp import BpParams

MAX_EXACT_NODES = 20


def exhaustive_marginals(
    subgraph: Subgraph, seeds: SeedSet, params: BpParams
) -> dict[int, float]:
    """Exact p(malicious) per node, over all 2^n joint states."""
    n = len(subgraph.nodes)
    if n == 0:
        raise EmptySubgraph("cannot enumerate an empty subgraph")
    if n > MAX_EXACT_NODES:
        raise TooLarge(f"{n} nodes exceeds the {MAX_EXACT_NODES}-node enumeration limit")

    index = {node.id: i for i, node in enumerate(subgraph.nodes)}
    s = params.prior_strength
    phi = np.empty((n, 2), dtype=np.float64)
    for node in subgraph.nodes:
        if node.label in seeds.malicious:
            phi[index[node.id]] = (1.0 - s, s)
        elif node.label in seeds.benign:
            phi[index[node.id]] = (s, 1.0 - s)
        else:
            phi[index[node.id]] = (0.5, 0.5)

    psi = np.array(
        [
            [0.5 + params.epsilon, 0.5 - params.epsilon],
            [0.5 - params.epsilon, 0.5 + params.epsilon],
        ],
        dtype=np.float64,
    )

    # bits[k, i] is node i's label in joint state k
    states = np.arange(2**n, dtype=np.int64)
    bits = (states[:, None] >> np.arange(n)) & 1

    with np.errstate(divide="ignore"):
        log_phi = np.log(phi)
        log_psi = np.log(psi)

    log_w = log_phi[np.arange(n), bits].sum(axis=1)
    for edge in subgraph.edges:
        log_w += log_psi[bits[:, index[edge.src]], bits[:, index[edge.dst]]]

    log_w -= log_w.max()
    w = np.exp(log_w)
    total = w.sum()
    return {
        node_id: float(w[bits[:, i] == 1].sum() / total) for node_id, i in index.items()
    }
