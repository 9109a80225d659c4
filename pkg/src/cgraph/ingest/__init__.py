"""Feed normalization, apex derivation, and ground-truth seed extraction."""

from cgraph.ingest.apex import PublicSuffixList, apex_of
from cgraph.ingest.adapters import (
    Skip,
    normalize_pdns,
    parse_enrichment_line,
    parse_rank_line,
    parse_reputation_line,
    read_enrichment_file,
    read_pdns_file,
    read_rank_file,
    read_reputation_file,
    register_adapter,
)
from cgraph.ingest.schema import (
    RRType,
    IpEnrichment,
    NormalizedRecord,
    RankEntry,
    ReputationReport,
)
from cgraph.ingest.seeds import (
    SeedSet,
    build_seed_set,
    extract_benign_seeds,
    extract_malicious_seeds,
    load_seed_set,
    save_seed_set,
)
from cgraph.ingest.tables import RankTable, ReputationTable

__all__ = [
    "RRType",
    "NormalizedRecord",
    "RankEntry",
    "ReputationReport",
    "IpEnrichment",
    "SeedSet",
    "Skip",
    "PublicSuffixList",
    "apex_of",
    "normalize_pdns",
    "register_adapter",
    "parse_rank_line",
    "parse_reputation_line",
    "parse_enrichment_line",
    "read_pdns_file",
    "read_rank_file",
    "read_reputation_file",
    "read_enrichment_file",
    "extract_benign_seeds",
    "extract_malicious_seeds",
    "build_seed_set",
    "load_seed_set",
    "save_seed_set",
    "RankTable",
    "ReputationTable",
]
