"""Request and response bodies for the HTTP API.

Scores round to 6 decimal places everywhere so that repeated queries
and the /score vs /infer pair compare bit-for-bit. Dates travel as
ISO-8601 strings; the inclusive day range arrives as `from`/`to` query
or body members (aliased, since `from` is reserved in Python).
"""

from datetime import date, datetime

from pydantic import BaseModel, ConfigDict, Field

from cgraph.graph.model import DayRange, Subgraph
from cgraph.inference.bp import BpParams, Verdict
from cgraph.inference.engine import DomainInference

SCORE_DECIMALS = 6
MAX_HOPS = 3
MAX_TIMELINE_DAYS = 90
SERVER_MAX_ITERATIONS = 1000


def round_score(score: float) -> float:
    return round(score, SCORE_DECIMALS)


class ApiError(BaseModel):
    code: str  # not_found | invalid_request | too_large | internal
    message: str


class SearchResult(BaseModel):
    domain: str
    kind: str
    positives: int | None


class HostingEntry(BaseModel):
    ip: str
    first_day: date
    last_day: date
    asn: int | None
    country: str | None


class DomainSummary(BaseModel):
    domain: str
    kind: str
    first_seen: date
    last_seen: date
    latest_positives: int | None
    latest_rank: int | None
    hosting_history: list[HostingEntry]


class NodeOut(BaseModel):
    id: int
    kind: str
    label: str


class EdgeOut(BaseModel):
    src: int
    dst: int
    kind: str
    days: list[date]


class SubgraphOut(BaseModel):
    nodes: list[NodeOut]
    edges: list[EdgeOut]
    truncated: bool

    @classmethod
    def from_subgraph(cls, subgraph: Subgraph) -> "SubgraphOut":
        return cls(
            nodes=[
                NodeOut(id=n.id, kind=n.kind.value, label=n.label)
                for n in subgraph.nodes
            ],
            edges=[
                EdgeOut(
                    src=e.src,
                    dst=e.dst,
                    kind=e.kind.value,
                    days=sorted(e.observed_days),
                )
                for e in subgraph.edges
            ],
            truncated=subgraph.truncated,
        )


class BpParamsIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    epsilon: float = Field(default=0.1, ge=0.0, lt=0.5)
    max_iterations: int = Field(default=100, ge=1, le=SERVER_MAX_ITERATIONS)
    tolerance: float = Field(default=1e-6, gt=0.0)
    damping: float = Field(default=0.1, ge=0.0, lt=1.0)
    prior_strength: float = Field(default=0.99, gt=0.5, le=1.0)

    def to_params(self) -> BpParams:
        return BpParams(
            epsilon=self.epsilon,
            max_iterations=self.max_iterations,
            tolerance=self.tolerance,
            damping=self.damping,
            prior_strength=self.prior_strength,
        )


class InferRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    domain: str
    hops: int = Field(default=2, ge=0, le=MAX_HOPS)
    from_day: date | None = Field(default=None, alias="from")
    to_day: date | None = Field(default=None, alias="to")
    params: BpParamsIn | None = None


class NodeScore(BaseModel):
    id: int
    kind: str
    label: str
    score: float


class SeedCount(BaseModel):
    benign: int
    malicious: int


class InferResponse(BaseModel):
    domain: str
    score: float
    verdict: Verdict
    converged: bool
    iterations_used: int
    seed_count: SeedCount
    truncated: bool
    nodes: list[NodeScore]

    @classmethod
    def from_inference(cls, inference: DomainInference) -> "InferResponse":
        result = inference.result
        return cls(
            domain=inference.domain,
            score=round_score(inference.score),
            verdict=inference.verdict,
            converged=result.converged,
            iterations_used=result.iterations_used,
            seed_count=SeedCount(
                benign=result.seed_count[0], malicious=result.seed_count[1]
            ),
            truncated=inference.subgraph.truncated,
            nodes=[
                NodeScore(
                    id=n.id,
                    kind=n.kind.value,
                    label=n.label,
                    score=round_score(result.scores[n.id]),
                )
                for n in inference.subgraph.nodes
            ],
        )


class ScoreResponse(BaseModel):
    domain: str
    score: float
    verdict: Verdict
    computed_at: datetime
    known: bool


class TimelineFrameOut(BaseModel):
    day: date
    subgraph: SubgraphOut
    scores: list[NodeScore] | None = None


class SeedsInfo(BaseModel):
    benign: int
    malicious: int
    window_start: date
    window_end: date


class HealthResponse(BaseModel):
    status: str
    nodes: int
    edges: int
    latest_day: date | None


def day_range_from(from_day: date | None, to_day: date | None) -> DayRange | None:
    """None when both ends are open (full history)."""
    if from_day is None and to_day is None:
        return None
    return DayRange(start=from_day, end=to_day)
