"""Shared state behind the HTTP handlers.

One loaded GraphStore plus the active SeedSet and the auxiliary rank /
reputation tables. The store is treated as immutable while serving;
seed reloads swap the SeedSet reference atomically so in-flight
requests keep the set they started with.
"""

import logging
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from cgraph.errors import NodeNotFound
from cgraph.graph.model import EdgeKind
from cgraph.graph.persistence import (
    load_enrichment_history,
    load_rank_history,
    load_reputation_history,
    load_store,
)
from cgraph.graph.store import GraphStore
from cgraph.ingest.seeds import SeedSet, load_seed_set
from cgraph.ingest.tables import RankTable, ReputationTable
from cgraph.service.schemas import DomainSummary, HostingEntry

logger = logging.getLogger(__name__)

_IP_EDGE_KINDS = (EdgeKind.APEX_IP, EdgeKind.FQDN_IP)


@dataclass
class ServiceState:
    store: GraphStore
    seeds: SeedSet
    ranks: RankTable = field(default_factory=RankTable)
    reputation: ReputationTable = field(default_factory=ReputationTable)
    seeds_path: Path | None = None

    @classmethod
    def from_paths(
        cls, store_dir: str | Path, seeds_path: str | Path | None = None
    ) -> "ServiceState":
        store = load_store(store_dir)
        if seeds_path is not None:
            seeds = load_seed_set(seeds_path)
        else:
            seeds = SeedSet.empty(store.earliest_day or date.today())
            logger.warning("no seed file given; inference will return uniform scores")
        ranks = RankTable()
        ranks.extend(load_rank_history(store_dir))
        reputation = ReputationTable()
        reputation.extend(load_reputation_history(store_dir))
        for item in load_enrichment_history(store_dir):
            store.apply_enrichment([item])
        return cls(
            store=store,
            seeds=seeds,
            ranks=ranks,
            reputation=reputation,
            seeds_path=Path(seeds_path) if seeds_path is not None else None,
        )

    def reload_seeds(self) -> SeedSet:
        if self.seeds_path is None:
            raise FileNotFoundError("service was started without a seed file")
        self.seeds = load_seed_set(self.seeds_path)
        return self.seeds

    def domain_summary(self, name: str, day: date | None = None) -> DomainSummary:
        node = self.store.find_domain(name)
        if node is None:
            raise NodeNotFound(f"domain {name!r} is not in the graph")
        if day is None:
            day = self.store.latest_day or date.today()

        all_days: list[date] = []
        hosting: list[HostingEntry] = []
        for edge in self.store.incident_edges(node.id):
            all_days.extend(edge.observed_days)
            if edge.kind not in _IP_EDGE_KINDS or edge.src != node.id:
                continue
            visible = sorted(d for d in edge.observed_days if d <= day)
            if not visible:
                continue
            ip_node = self.store.node_by_id(edge.dst)
            enrichment = ip_node.enrichment
            hosting.append(
                HostingEntry(
                    ip=ip_node.label,
                    first_day=visible[0],
                    last_day=visible[-1],
                    asn=enrichment.asn if enrichment else None,
                    country=enrichment.country if enrichment else None,
                )
            )
        hosting.sort(key=lambda h: (h.first_day, h.ip))

        first_seen = min(all_days) if all_days else day
        last_seen = max(all_days) if all_days else day
        return DomainSummary(
            domain=name,
            kind=node.kind.value,
            first_seen=first_seen,
            last_seen=last_seen,
            latest_positives=self.reputation.latest(name, as_of=day),
            latest_rank=self.ranks.latest(name, as_of=day),
            hosting_history=hosting,
        )
