"""Shared fixtures: record builders and a small investigation fixture."""

from datetime import date

import pytest

from cgraph.graph.store import GraphStore
from cgraph.ingest.schema import NormalizedRecord, RRType

DAY = date(2024, 5, 1)

# one line per acceptance criterion, echoed after the test summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def rec(
    qname: str,
    rdata: str,
    rrtype: RRType = RRType.A,
    day: date = DAY,
    count: int = 1,
) -> NormalizedRecord:
    return NormalizedRecord(
        observed_day=day, rrtype=rrtype, qname=qname, rdata=rdata, count=count
    )


@pytest.fixture
def store() -> GraphStore:
    return GraphStore()


@pytest.fixture
def shared_ip_store() -> GraphStore:
    """One IP hosting five apexes; a second IP hosting one of them."""
    s = GraphStore()
    for name in (
        "paypal-assist.com",
        "paypal-debit.com",
        "secure-pay.net",
        "login-pages.org",
        "harmless.example",
    ):
        s.upsert_record(rec(name, "47.254.170.24"))
    s.upsert_record(rec("harmless.example", "8.8.4.4"))
    return s
