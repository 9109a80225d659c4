"""Line-oriented feed adapters producing common-schema values.

Adapters never raise on dirty data: a malformed or unsupported line
becomes a :class:`Skip` carrying the reason, so callers can count and
move on. Only structural misuse (unknown adapter id) raises.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Iterator, Union

from cgraph.errors import UnknownAdapter
from cgraph.ingest.schema import (
    RRType,
    IpEnrichment,
    NormalizedRecord,
    RankEntry,
    ReputationReport,
    canonical_hostname,
    is_valid_hostname,
    is_valid_ipv4,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Skip:
    """Marker for a line the adapter rejected, with the reason why."""

    reason: str
    line: str = ""


ParsedLine = Union[NormalizedRecord, Skip]
PdnsAdapter = Callable[[str], ParsedLine]

_ADAPTERS: dict[str, PdnsAdapter] = {}


def register_adapter(adapter_id: str, fn: PdnsAdapter) -> None:
    """Register a DNS-record adapter under ``adapter_id``."""
    _ADAPTERS[adapter_id] = fn


def normalize_pdns(raw_line: str, adapter: str = "pdns") -> ParsedLine:
    """Normalize one feed line via the named adapter.

    Returns a validated :class:`NormalizedRecord`, or a :class:`Skip`
    for malformed or unsupported lines; never partially-valid output.
    """
    try:
        fn = _ADAPTERS[adapter]
    except KeyError:
        raise UnknownAdapter(f"no adapter registered under {adapter!r}") from None
    return fn(raw_line)


def _clean_rdata(rrtype: RRType, raw: str) -> str | None:
    """Canonicalize rdata per record type; None when unusable.

    MX rdata may carry a leading preference number; SOA rdata may carry
    the full SOA text, of which only the primary nameserver is kept.
    """
    text = raw.strip().lower()
    if rrtype is RRType.A:
        return text if is_valid_ipv4(text) else None
    parts = text.split()
    if rrtype is RRType.MX and len(parts) > 1 and parts[0].isdigit():
        text = parts[-1]
    elif rrtype is RRType.SOA and len(parts) > 1:
        text = parts[0]
    elif len(parts) != 1:
        return None
    text = canonical_hostname(text)
    return text if is_valid_hostname(text) else None


def _parse_pdns_line(raw_line: str) -> ParsedLine:
    line = raw_line.strip()
    if not line:
        return Skip("empty line", raw_line)
    try:
        obj = json.loads(line)
    except json.JSONDecodeError:
        return Skip("malformed json", raw_line)
    if not isinstance(obj, dict):
        return Skip("malformed json", raw_line)
    missing = {"rrname", "rrtype", "rdata", "time"} - obj.keys()
    if missing:
        return Skip(f"missing fields: {', '.join(sorted(missing))}", raw_line)
    try:
        rrtype = RRType(str(obj["rrtype"]).upper())
    except ValueError:
        return Skip("unsupported rrtype", raw_line)
    qname = canonical_hostname(str(obj["rrname"]))
    if not is_valid_hostname(qname):
        return Skip("invalid qname", raw_line)
    rdata = _clean_rdata(rrtype, str(obj["rdata"]))
    if rdata is None:
        return Skip("invalid rdata", raw_line)
    try:
        ts = float(obj["time"])
        day = datetime.fromtimestamp(ts, tz=timezone.utc).date()
    except (TypeError, ValueError, OSError, OverflowError):
        return Skip("invalid time", raw_line)
    try:
        count = int(obj.get("count", 1))
    except (TypeError, ValueError):
        return Skip("invalid count", raw_line)
    if count < 0:
        return Skip("invalid count", raw_line)
    return NormalizedRecord(
        observed_day=day,
        rrtype=rrtype,
        qname=qname,
        rdata=rdata,
        count=count,
        source="pdns",
    )


register_adapter("pdns", _parse_pdns_line)


def parse_rank_line(line: str, day: date) -> RankEntry | Skip:
    """Parse one ``rank,domain`` CSV line from a daily rank feed."""
    text = line.strip()
    if not text:
        return Skip("empty line", line)
    parts = text.split(",")
    if len(parts) != 2:
        return Skip("malformed csv", line)
    rank_text, domain = parts[0].strip(), canonical_hostname(parts[1])
    if not rank_text.isdigit():
        if rank_text.lower() == "rank":
            return Skip("header", line)
        return Skip("invalid rank", line)
    rank = int(rank_text)
    if rank < 1:
        return Skip("invalid rank", line)
    if not is_valid_hostname(domain):
        return Skip("invalid domain", line)
    return RankEntry(day=day, domain=domain, rank=rank)


def parse_reputation_line(line: str) -> ReputationReport | Skip:
    """Parse one JSON reputation report (domain, positives, total, scan_date)."""
    text = line.strip()
    if not text:
        return Skip("empty line", line)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        return Skip("malformed json", line)
    if not isinstance(obj, dict):
        return Skip("malformed json", line)
    missing = {"domain", "positives", "total", "scan_date"} - obj.keys()
    if missing:
        return Skip(f"missing fields: {', '.join(sorted(missing))}", line)
    domain = canonical_hostname(str(obj["domain"]))
    if not is_valid_hostname(domain):
        return Skip("invalid domain", line)
    try:
        day = date.fromisoformat(str(obj["scan_date"])[:10])
        positives = int(obj["positives"])
        total = int(obj["total"])
    except (TypeError, ValueError):
        return Skip("invalid field value", line)
    if not (0 <= positives <= total):
        return Skip("positives out of range", line)
    return ReputationReport(day=day, domain=domain, positives=positives, total_engines=total)


def parse_enrichment_line(line: str) -> IpEnrichment | Skip:
    """Parse one ``ip,asn,country`` CSV line; asn and country may be blank."""
    text = line.strip()
    if not text:
        return Skip("empty line", line)
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        return Skip("malformed csv", line)
    ip, asn_text, country = parts
    if not is_valid_ipv4(ip):
        if ip.lower() == "ip":
            return Skip("header", line)
        return Skip("invalid ip", line)
    asn = None
    if asn_text:
        if not asn_text.isdigit() or int(asn_text) < 1:
            return Skip("invalid asn", line)
        asn = int(asn_text)
    country = country.upper() or None
    if country is not None and not (len(country) == 2 and country.isalpha()):
        return Skip("invalid country", line)
    return IpEnrichment(ip=ip, asn=asn, country=country)


def _iter_lines(path: str | Path) -> Iterator[str]:
    with open(path, encoding="utf-8") as fh:
        yield from fh


def read_pdns_file(path: str | Path, adapter: str = "pdns") -> Iterator[ParsedLine]:
    for line in _iter_lines(path):
        yield normalize_pdns(line, adapter)


def day_from_filename(path: str | Path) -> date:
    """Feed day encoded in the file stem, e.g. ``2021-03-01.csv``."""
    return date.fromisoformat(Path(path).stem)


def read_rank_file(path: str | Path, day: date | None = None) -> Iterator[RankEntry | Skip]:
    feed_day = day if day is not None else day_from_filename(path)
    for line in _iter_lines(path):
        yield parse_rank_line(line, feed_day)


def read_reputation_file(path: str | Path) -> Iterator[ReputationReport | Skip]:
    for line in _iter_lines(path):
        yield parse_reputation_line(line)


def read_enrichment_file(path: str | Path) -> Iterator[IpEnrichment | Skip]:
    for line in _iter_lines(path):
        yield parse_enrichment_line(line)


def partition_skips(items: Iterable) -> tuple[list, list[Skip]]:
    """Split a parsed stream into (values, skips), logging skip totals."""
    values, skips = [], []
    for item in items:
        (skips if isinstance(item, Skip) else values).append(item)
    if skips:
        logger.info("skipped %d malformed lines", len(skips))
    return values, skips
