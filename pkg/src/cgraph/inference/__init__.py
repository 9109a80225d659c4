"""Belief propagation scoring and its exact-enumeration oracle."""

from cgraph.inference.bp import (
    BeliefState,
    BpParams,
    InferenceResult,
    Verdict,
    classify,
    edge_potential,
    node_prior,
    propagate,
    run_bp,
)
from cgraph.inference.engine import DEFAULT_HOPS, DomainInference, infer_domain
from cgraph.inference.exact import MAX_EXACT_NODES, exhaustive_marginals

__all__ = [
    "BeliefState",
    "BpParams",
    "DEFAULT_HOPS",
    "DomainInference",
    "InferenceResult",
    "MAX_EXACT_NODES",
    "Verdict",
    "classify",
    "edge_potential",
    "exhaustive_marginals",
    "infer_domain",
    "node_prior",
    "propagate",
    "run_bp",
]
