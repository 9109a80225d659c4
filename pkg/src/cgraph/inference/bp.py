"""Loopy belief propagation over domain subgraphs.

Nodes carry a two-state label distribution (benign, malicious). Seeds
get skewed priors, everyone else starts uniform, and a homophilic edge
potential couples neighbors. Messages flood synchronously each round
until the largest per-message change drops below tolerance.
"""

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from cgraph.errors import EmptySubgraph, EpsilonOutOfRange
from cgraph.graph.model import Node, Subgraph
from cgraph.ingest.seeds import SeedSet

logger = logging.getLogger(__name__)

BENIGN_STATE = 0
MALICIOUS_STATE = 1


class Verdict(str, Enum):
    BENIGN = "BENIGN"
    MALICIOUS = "MALICIOUS"


@dataclass(frozen=True)
class BpParams:
    """Tunable knobs for one propagation run."""

    epsilon: float = 0.1
    max_iterations: int = 100
    tolerance: float = 1e-6
    damping: float = 0.1
    prior_strength: float = 0.99

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 0.5:
            raise EpsilonOutOfRange(f"epsilon must be in [0, 0.5), got {self.epsilon}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")
        if not 0.0 <= self.damping < 1.0:
            raise ValueError("damping must be in [0, 1)")
        if not 0.5 < self.prior_strength <= 1.0:
            raise ValueError("prior_strength must be in (0.5, 1]")


@dataclass
class BeliefState:
    """Converged (or best-effort) beliefs plus the final message table.

    beliefs maps node id to (p_benign, p_malicious); messages maps the
    directed pair (src id, dst id) to the message that src last sent to
    dst. Both are normalized pairs.
    """

    beliefs: dict[int, tuple[float, float]]
    messages: dict[tuple[int, int], tuple[float, float]]
    iteration: int
    converged: bool


@dataclass(frozen=True)
class InferenceResult:
    scores: dict[int, float]
    converged: bool
    iterations_used: int
    seed_count: tuple[int, int]  # (benign, malicious)


def edge_potential(epsilon: float) -> np.ndarray:
    """Symmetric homophily potential: agreement beats disagreement by 2*epsilon."""
    if not 0.0 <= epsilon < 0.5:
        raise EpsilonOutOfRange(f"epsilon must be in [0, 0.5), got {epsilon}")
    return np.array(
        [[0.5 + epsilon, 0.5 - epsilon], [0.5 - epsilon, 0.5 + epsilon]],
        dtype=np.float64,
    )


def node_prior(node: Node, seeds: SeedSet, prior_strength: float) -> tuple[float, float]:
    label = seeds.label_of(node.label)
    if label == "malicious":
        return (1.0 - prior_strength, prior_strength)
    if label == "benign":
        return (prior_strength, 1.0 - prior_strength)
    return (0.5, 0.5)


def _count_seeds(subgraph: Subgraph, seeds: SeedSet) -> tuple[int, int]:
    benign = sum(1 for n in subgraph.nodes if n.label in seeds.benign)
    malicious = sum(1 for n in subgraph.nodes if n.label in seeds.malicious)
    return (benign, malicious)


def propagate(subgraph: Subgraph, seeds: SeedSet, params: BpParams) -> BeliefState:
    """Run synchronous sum-product message passing to (near) fixpoint.

    Each undirected edge contributes two directed messages, processed in
    ascending (src id, dst id) order. One round recomputes every message
    from the previous round's table, applies damping, and renormalizes;
    the round's delta is the largest single-component change measured
    after damping.
    """
    if not subgraph.nodes:
        raise EmptySubgraph("cannot propagate over an empty subgraph")

    node_ids = [n.id for n in subgraph.nodes]
    index = {nid: i for i, nid in enumerate(node_ids)}
    n = len(node_ids)

    phi = np.empty((n, 2), dtype=np.float64)
    for node in subgraph.nodes:
        phi[index[node.id]] = node_prior(node, seeds, params.prior_strength)

    directed = sorted(
        {(e.src, e.dst) for e in subgraph.edges}
        | {(e.dst, e.src) for e in subgraph.edges}
    )
    if not directed:
        beliefs = phi / phi.sum(axis=1, keepdims=True)
        return BeliefState(
            beliefs={nid: (beliefs[i, 0], beliefs[i, 1]) for nid, i in index.items()},
            messages={},
            iteration=0,
            converged=True,
        )

    src = np.array([index[a] for a, _ in directed], dtype=np.intp)
    dst = np.array([index[b] for _, b in directed], dtype=np.intp)
    rev_pos = {pair: k for k, pair in enumerate(directed)}
    rev = np.array([rev_pos[(b, a)] for a, b in directed], dtype=np.intp)

    psi = edge_potential(params.epsilon)
    m = np.full((len(directed), 2), 0.5, dtype=np.float64)

    # log-space product of incoming messages; subtracting the reverse
    # message excludes the recipient. Messages stay strictly positive
    # because psi has no zero entries, so the logs are finite.
    with np.errstate(divide="ignore"):
        log_phi = np.log(phi)  # -inf allowed when prior_strength == 1

    converged = False
    iteration = 0
    for iteration in range(1, params.max_iterations + 1):
        log_m = np.log(m)
        incoming = np.zeros((n, 2), dtype=np.float64)
        np.add.at(incoming, dst, log_m)
        log_q = log_phi[src] + incoming[src] - log_m[rev]
        log_q -= log_q.max(axis=1, keepdims=True)
        q = np.exp(log_q)
        m_new = q @ psi
        m_new /= m_new.sum(axis=1, keepdims=True)
        m_damped = (1.0 - params.damping) * m_new + params.damping * m
        delta = np.abs(m_damped - m).max()
        m = m_damped
        if delta < params.tolerance:
            converged = True
            break

    log_m = np.log(m)
    incoming = np.zeros((n, 2), dtype=np.float64)
    np.add.at(incoming, dst, log_m)
    log_b = log_phi + incoming
    log_b -= log_b.max(axis=1, keepdims=True)
    b = np.exp(log_b)
    b /= b.sum(axis=1, keepdims=True)

    return BeliefState(
        beliefs={nid: (b[i, 0], b[i, 1]) for nid, i in index.items()},
        messages={pair: (m[k, 0], m[k, 1]) for k, pair in enumerate(directed)},
        iteration=iteration,
        converged=converged,
    )


def run_bp(subgraph: Subgraph, seeds: SeedSet, params: BpParams | None = None) -> InferenceResult:
    """Propagate beliefs and reduce to per-node maliciousness scores."""
    params = params or BpParams()
    state = propagate(subgraph, seeds, params)
    if not state.converged:
        logger.warning(
            "belief propagation did not converge after %d iterations", state.iteration
        )
    return InferenceResult(
        scores={nid: belief[MALICIOUS_STATE] for nid, belief in state.beliefs.items()},
        converged=state.converged,
        iterations_used=state.iteration,
        seed_count=_count_seeds(subgraph, seeds),
    )


def classify(score: float, threshold: float = 0.5) -> Verdict:
    """Strict inequality: a score sitting exactly on the threshold is benign."""
    if not 0.0 <= score <= 1.0:
        raise ValueError(f"score must be in [0, 1], got {score}")
    return Verdict.MALICIOUS if score > threshold else Verdict.BENIGN
