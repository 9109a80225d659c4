"""HTTP API over a loaded graph store.

All routes live under /api/v1. Error bodies are uniformly
{"code": ..., "message": ...} with code one of not_found,
invalid_request, too_large, internal; framework validation errors are
folded into the same shape as 400s.
"""

import logging
from datetime import date, datetime, timezone

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from cgraph.errors import CgraphError, InvalidRange, NodeNotFound, TooLarge
from cgraph.inference.bp import BpParams, classify, run_bp
from cgraph.inference.engine import infer_domain
from cgraph.service.schemas import (
    ApiError,
    BpParamsIn,
    DomainSummary,
    HealthResponse,
    InferRequest,
    InferResponse,
    MAX_HOPS,
    MAX_TIMELINE_DAYS,
    NodeScore,
    ScoreResponse,
    SearchResult,
    SeedsInfo,
    SubgraphOut,
    TimelineFrameOut,
    day_range_from,
    round_score,
)
from cgraph.service.state import ServiceState

logger = logging.getLogger(__name__)

API_PREFIX = "/api/v1"


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status, content=ApiError(code=code, message=message).model_dump()
    )


def create_app(state: ServiceState, cors_origins: list[str] | None = None) -> FastAPI:
    app = FastAPI(title="cgraph", version="1.0", docs_url=None, redoc_url=None)
    app.state.cgraph = state

    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins if cors_origins is not None else ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        loc = ".".join(str(part) for part in first.get("loc", ()))
        return _error(400, "invalid_request", f"{loc}: {first.get('msg', 'invalid')}")

    @app.exception_handler(NodeNotFound)
    async def on_not_found(request: Request, exc: NodeNotFound):
        return _error(404, "not_found", str(exc))

    @app.exception_handler(InvalidRange)
    async def on_invalid_range(request: Request, exc: InvalidRange):
        return _error(400, "invalid_request", str(exc))

    @app.exception_handler(TooLarge)
    async def on_too_large(request: Request, exc: TooLarge):
        return _error(413, "too_large", str(exc))

    @app.exception_handler(CgraphError)
    async def on_cgraph_error(request: Request, exc: CgraphError):
        logger.exception("unhandled store error")
        return _error(500, "internal", str(exc))

    @app.exception_handler(Exception)
    async def on_internal_error(request: Request, exc: Exception):
        logger.exception("unhandled error")
        return _error(500, "internal", "internal server error")

    @app.get(API_PREFIX + "/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        store = state.store
        return HealthResponse(
            status="ok",
            nodes=store.node_count,
            edges=store.edge_count,
            latest_day=store.latest_day,
        )

    @app.get(API_PREFIX + "/search", response_model=list[SearchResult])
    def search(
        q: str = Query(...),
        limit: int = Query(default=25, ge=1, le=100),
    ):
        keyword = q.strip()
        if not keyword:
            return _error(400, "invalid_request", "q must be non-empty")
        hits = state.store.search_domains(keyword, limit, state.reputation)
        return [
            SearchResult(domain=h.domain, kind=h.kind.value, positives=h.positives)
            for h in hits
        ]

    @app.get(API_PREFIX + "/domains/{name}", response_model=DomainSummary)
    def domain_summary(name: str, day: date | None = Query(default=None)):
        return state.domain_summary(name.strip().lower(), day)

    @app.get(API_PREFIX + "/domains/{name}/subgraph", response_model=SubgraphOut)
    def domain_subgraph(
        name: str,
        hops: int = Query(default=2, ge=0, le=MAX_HOPS),
        from_day: date | None = Query(default=None, alias="from"),
        to_day: date | None = Query(default=None, alias="to"),
    ):
        node = state.store.find_domain(name.strip().lower())
        if node is None:
            raise NodeNotFound(f"domain {name!r} is not in the graph")
        as_of = day_range_from(from_day, to_day)
        subgraph = state.store.k_hop_subgraph((node.kind, node.label), hops, as_of)
        return SubgraphOut.from_subgraph(subgraph)

    @app.post(API_PREFIX + "/infer", response_model=InferResponse)
    def infer(body: InferRequest):
        params = (body.params or BpParamsIn()).to_params()
        as_of = day_range_from(body.from_day, body.to_day)
        inference = infer_domain(
            state.store,
            body.domain.strip().lower(),
            state.seeds,
            params=params,
            as_of=as_of,
            hops=body.hops,
        )
        return InferResponse.from_inference(inference)

    @app.get(API_PREFIX + "/score/{name}", response_model=ScoreResponse)
    def score(name: str):
        domain = name.strip().lower()
        now = datetime.now(timezone.utc)
        try:
            inference = infer_domain(state.store, domain, state.seeds)
        except NodeNotFound:
            return ScoreResponse(
                domain=domain,
                score=0.5,
                verdict=classify(0.5),
                computed_at=now,
                known=False,
            )
        return ScoreResponse(
            domain=domain,
            score=round_score(inference.score),
            verdict=inference.verdict,
            computed_at=now,
            known=True,
        )

    @app.get(
        API_PREFIX + "/domains/{name}/timeline",
        response_model=list[TimelineFrameOut],
    )
    def domain_timeline(
        name: str,
        hops: int = Query(default=2, ge=0, le=MAX_HOPS),
        from_day: date | None = Query(default=None, alias="from"),
        to_day: date | None = Query(default=None, alias="to"),
        infer: bool = Query(default=False),
    ):
        node = state.store.find_domain(name.strip().lower())
        if node is None:
            raise NodeNotFound(f"domain {name!r} is not in the graph")
        latest = state.store.latest_day
        start = from_day or latest
        end = to_day or latest
        if start is None or end is None:
            raise InvalidRange("store has no observations to replay")
        if start > end:
            raise InvalidRange(f"from {start} after to {end}")
        if (end - start).days + 1 > MAX_TIMELINE_DAYS:
            raise InvalidRange(f"span exceeds {MAX_TIMELINE_DAYS} days")

        frames = state.store.timeline((node.kind, node.label), hops, start, end)
        out = []
        for frame in frames:
            scores = None
            if infer:
                result = run_bp(frame.subgraph, state.seeds, BpParams())
                scores = [
                    NodeScore(
                        id=n.id,
                        kind=n.kind.value,
                        label=n.label,
                        score=round_score(result.scores[n.id]),
                    )
                    for n in frame.subgraph.nodes
                ]
            out.append(
                TimelineFrameOut(
                    day=frame.day,
                    subgraph=SubgraphOut.from_subgraph(frame.subgraph),
                    scores=scores,
                )
            )
        return out

    @app.post(API_PREFIX + "/admin/reload-seeds", response_model=SeedsInfo)
    def reload_seeds():
        try:
            seeds = state.reload_seeds()
        except (FileNotFoundError, KeyError, ValueError) as exc:
            return _error(400, "invalid_request", f"seed file unreadable: {exc}")
        return SeedsInfo(
            benign=len(seeds.benign),
            malicious=len(seeds.malicious),
            window_start=seeds.window_start,
            window_end=seeds.window_end,
        )

    return app
