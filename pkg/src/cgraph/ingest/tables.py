"""In-memory lookup tables over rank and reputation feed history.

These back the search ranking and the dashboard's rank/positives
time series; the graph store itself never sees them.
"""

from __future__ import annotations

from bisect import bisect_right
from collections import defaultdict
from datetime import date
from pathlib import Path
from typing import Iterable

from cgraph.ingest.adapters import (
    Skip,
    read_rank_file,
    read_reputation_file,
)
from cgraph.ingest.schema import RankEntry, ReputationReport


class _DailySeries:
    """Per-domain (day, value) series kept sorted by day."""

    def __init__(self):
        self._series: dict[str, list[tuple[date, int]]] = defaultdict(list)
        self._dirty: set[str] = set()

    def add(self, domain: str, day: date, value: int) -> None:
        self._series[domain].append((day, value))
        self._dirty.add(domain)

    def _sorted(self, domain: str) -> list[tuple[date, int]]:
        if domain in self._dirty:
            dedup: dict[date, int] = {}
            for day, value in self._series[domain]:
                dedup[day] = value  # later insertion wins for duplicate days
            self._series[domain] = sorted(dedup.items())
            self._dirty.discard(domain)
        return self._series.get(domain, [])

    def latest(self, domain: str, as_of: date | None = None) -> int | None:
        series = self._sorted(domain)
        if not series:
            return None
        if as_of is None:
            return series[-1][1]
        idx = bisect_right(series, (as_of, float("inf")))
        return series[idx - 1][1] if idx else None

    def history(self, domain: str) -> list[tuple[date, int]]:
        return list(self._sorted(domain))

    def get(self, domain: str, default=None):
        value = self.latest(domain)
        return default if value is None else value


class ReputationTable(_DailySeries):
    """Latest and historical report positives per domain."""

    def add_report(self, report: ReputationReport) -> None:
        self.add(report.domain, report.day, report.positives)

    def extend(self, reports: Iterable[ReputationReport]) -> None:
        for report in reports:
            self.add_report(report)

    @classmethod
    def from_files(cls, paths: Iterable[str | Path]) -> "ReputationTable":
        table = cls()
        for path in paths:
            for item in read_reputation_file(path):
                if not isinstance(item, Skip):
                    table.add_report(item)
        return table


class RankTable(_DailySeries):
    """Latest and historical rank per domain."""

    def add_entry(self, entry: RankEntry) -> None:
        self.add(entry.domain, entry.day, entry.rank)

    def extend(self, entries: Iterable[RankEntry]) -> None:
        for entry in entries:
            self.add_entry(entry)

    @classmethod
    def from_files(cls, paths: Iterable[str | Path]) -> "RankTable":
        table = cls()
        for path in paths:
            for item in read_rank_file(path):
                if not isinstance(item, Skip):
                    table.add_entry(item)
        return table
