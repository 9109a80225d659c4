"""Ground-truth seed extraction from rank and reputation feeds.

Benign seeds are domains that hold a rank at or under the threshold on
every day of a 7-day window; short-lived domains do not survive that
filter. Malicious seeds are domains with at least one reputation report
in the window at or above the positives cutoff; reports with fewer
positives are too weak a signal to seed from.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path
from typing import Collection, Mapping

from cgraph.errors import EmptyFeed, NonConsecutiveDays
from cgraph.ingest.schema import RankEntry, ReputationReport

logger = logging.getLogger(__name__)

WINDOW_DAYS = 7


@dataclass(frozen=True)
class SeedSet:
    """Labeled ground-truth domains for one extraction window."""

    benign: frozenset[str]
    malicious: frozenset[str]
    window_start: date
    window_end: date

    def __post_init__(self):
        if self.benign & self.malicious:
            raise ValueError("benign and malicious seed sets overlap")
        if (self.window_end - self.window_start).days != WINDOW_DAYS - 1:
            raise NonConsecutiveDays(
                f"window must span exactly {WINDOW_DAYS} consecutive days"
            )

    @classmethod
    def empty(cls, window_start: date) -> "SeedSet":
        return cls(
            benign=frozenset(),
            malicious=frozenset(),
            window_start=window_start,
            window_end=window_start + timedelta(days=WINDOW_DAYS - 1),
        )

    def label_of(self, domain: str) -> str | None:
        if domain in self.malicious:
            return "malicious"
        if domain in self.benign:
            return "benign"
        return None


def _window_days(days: Collection[date]) -> list[date]:
    ordered = sorted(days)
    if len(ordered) != WINDOW_DAYS:
        raise NonConsecutiveDays(f"expected {WINDOW_DAYS} daily feeds, got {len(ordered)}")
    for prev, cur in zip(ordered, ordered[1:]):
        if (cur - prev).days != 1:
            raise NonConsecutiveDays(f"gap between {prev} and {cur}")
    return ordered


def extract_benign_seeds(
    feeds: Mapping[date, Collection[RankEntry]],
    rank_threshold: int = 10000,
    required_days: int = WINDOW_DAYS,
) -> set[str]:
    """Domains ranked <= ``rank_threshold`` on at least ``required_days``
    of the 7-day window (default: all 7).
    """
    if rank_threshold < 1:
        raise ValueError("rank_threshold must be >= 1")
    if not (1 <= required_days <= WINDOW_DAYS):
        raise ValueError(f"required_days must be in [1, {WINDOW_DAYS}]")
    ordered = _window_days(feeds.keys())
    qualifying_days: dict[str, int] = {}
    for day in ordered:
        entries = feeds[day]
        if not entries:
            raise EmptyFeed(f"rank feed for {day} is empty")
        daily = {e.domain for e in entries if e.rank <= rank_threshold}
        for domain in daily:
            qualifying_days[domain] = qualifying_days.get(domain, 0) + 1
    return {d for d, n in qualifying_days.items() if n >= required_days}


def extract_malicious_seeds(
    feeds: Mapping[date, Collection[ReputationReport]],
    min_positives: int = 3,
) -> set[str]:
    """Domains with any report in the window at ``positives >= min_positives``.

    Days without reports are allowed; the window itself must still be
    7 consecutive days.
    """
    if min_positives < 1:
        raise ValueError("min_positives must be >= 1")
    ordered = _window_days(feeds.keys())
    out: set[str] = set()
    for day in ordered:
        for report in feeds[day]:
            if report.positives >= min_positives:
                out.add(report.domain)
    return out


def build_seed_set(
    benign: Collection[str],
    malicious: Collection[str],
    window_start: date,
    window_end: date,
) -> SeedSet:
    """Combine label sets into a SeedSet, resolving conflicts to malicious.

    A blacklisted domain that also sits in the top ranks is the dangerous
    case to miss, so the malicious label wins and the conflict is logged.
    """
    benign_set = frozenset(benign)
    malicious_set = frozenset(malicious)
    conflicts = benign_set & malicious_set
    if conflicts:
        logger.warning(
            "%d seed domains labeled both benign and malicious; keeping malicious: %s",
            len(conflicts),
            ", ".join(sorted(conflicts)[:10]),
        )
        benign_set -= conflicts
    return SeedSet(
        benign=benign_set,
        malicious=malicious_set,
        window_start=window_start,
        window_end=window_end,
    )


def save_seed_set(seeds: SeedSet, path: str | Path) -> None:
    payload = {
        "benign": sorted(seeds.benign),
        "malicious": sorted(seeds.malicious),
        "window_start": seeds.window_start.isoformat(),
        "window_end": seeds.window_end.isoformat(),
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_seed_set(path: str | Path) -> SeedSet:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    return SeedSet(
        benign=frozenset(obj["benign"]),
        malicious=frozenset(obj["malicious"]),
        window_start=date.fromisoformat(obj["window_start"]),
        window_end=date.fromisoformat(obj["window_end"]),
    )
