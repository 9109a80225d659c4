"""Common record schema shared by every feed adapter.

All adapters normalize into these types; downstream modules (graph store,
seed extraction, enrichment) never see raw feed formats.
"""

from __future__ import annotations

import enum
import ipaddress
import json
import re
from dataclasses import dataclass
from datetime import date

HOSTNAME_LABEL = re.compile(r"^[a-z0-9_](?:[a-z0-9_-]*[a-z0-9_])?$")


class RRType(str, enum.Enum):
    """DNS record types admitted into the graph."""

    A = "A"
    NS = "NS"
    MX = "MX"
    SOA = "SOA"
    CNAME = "CNAME"


def is_valid_hostname(name: str) -> bool:
    """Syntactic hostname check: lowercase, dotted, sane labels.

    Requires at least two labels; underscores are allowed because they
    occur in real DNS data (service and policy records).
    """
    if not name or len(name) > 253 or name != name.lower():
        return False
    labels = name.split(".")
    if len(labels) < 2:
        return False
    return all(len(l) <= 63 and HOSTNAME_LABEL.match(l) for l in labels)


def is_valid_ipv4(text: str) -> bool:
    try:
        ipaddress.IPv4Address(text)
    except (ipaddress.AddressValueError, ValueError):
        return False
    return True


def canonical_hostname(raw: str) -> str:
    """Lowercase and strip the trailing dot; no validity guarantee."""
    return raw.strip().lower().rstrip(".")


@dataclass(frozen=True)
class NormalizedRecord:
    """One observed DNS resolution in the common schema."""

    observed_day: date
    rrtype: RRType
    qname: str
    rdata: str
    count: int = 1
    source: str = "pdns"

    def __post_init__(self):
        if not is_valid_hostname(self.qname):
            raise ValueError(f"invalid qname: {self.qname!r}")
        if self.rrtype is RRType.A:
            if not is_valid_ipv4(self.rdata):
                raise ValueError(f"rrtype=A requires IPv4 rdata, got {self.rdata!r}")
        elif not is_valid_hostname(self.rdata):
            raise ValueError(f"invalid rdata hostname: {self.rdata!r}")
        if self.count < 0:
            raise ValueError("count must be >= 0")

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "observed_day": self.observed_day.isoformat(),
                "rrtype": self.rrtype.value,
                "qname": self.qname,
                "rdata": self.rdata,
                "count": self.count,
                "source": self.source,
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json_line(cls, line: str) -> "NormalizedRecord":
        obj = json.loads(line)
        return cls(
            observed_day=date.fromisoformat(obj["observed_day"]),
            rrtype=RRType(obj["rrtype"]),
            qname=obj["qname"],
            rdata=obj["rdata"],
            count=int(obj.get("count", 1)),
            source=obj.get("source", "pdns"),
        )


@dataclass(frozen=True)
class RankEntry:
    """One domain's popularity rank on one day."""

    day: date
    domain: str
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if self.domain != self.domain.lower():
            raise ValueError("domain must be lowercase")


@dataclass(frozen=True)
class ReputationReport:
    """One aggregated reputation report for a domain on one day."""

    day: date
    domain: str
    positives: int
    total_engines: int

    def __post_init__(self):
        if not (0 <= self.positives <= self.total_engines):
            raise ValueError("positives must satisfy 0 <= positives <= total_engines")
        if self.total_engines < 1:
            raise ValueError("total_engines must be >= 1")
        if self.domain != self.domain.lower():
            raise ValueError("domain must be lowercase")


@dataclass(frozen=True)
class IpEnrichment:
    """ASN / geolocation attributes attached to an IP node."""

    ip: str
    asn: int | None = None
    country: str | None = None

    def __post_init__(self):
        if not is_valid_ipv4(self.ip):
            raise ValueError(f"invalid IPv4 address: {self.ip!r}")
        if self.asn is not None and self.asn < 1:
            raise ValueError("asn must be positive")
        if self.country is not None and not re.fullmatch(r"[A-Z]{2}", self.country):
            raise ValueError("country must be two uppercase letters")
