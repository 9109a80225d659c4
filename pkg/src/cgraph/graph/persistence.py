"""On-disk store layout: append log, binary snapshot, manifest.

Directory contents:

* ``records.log``    -- JSON Lines, one normalized record per line,
  append-only. The suffix beyond the snapshot's compaction point is
  replayed on load.
* ``snapshot.bin``   -- little-endian binary: magic ``CGKG``, a u16
  format version, the node table, the adjacency (edge) section with a
  day bitmap per edge keyed by the 2000-01-01 epoch, and a trailing
  CRC32 over everything before it.
* ``manifest.json``  -- epoch origin, counts, last compaction day.
* ``feeds/``         -- optional auxiliary rank / reputation /
  enrichment history consumed by the service layer.

All dates serialize as ISO-8601 ``YYYY-MM-DD``.
"""

from __future__ import annotations

import json
import struct
import zlib
from datetime import date, timedelta
from pathlib import Path
from typing import Iterable

from cgraph.errors import CorruptStore, VersionMismatch
from cgraph.ingest.adapters import Skip, parse_enrichment_line, parse_reputation_line
from cgraph.ingest.apex import PublicSuffixList
from cgraph.ingest.schema import (
    IpEnrichment,
    NormalizedRecord,
    RankEntry,
    ReputationReport,
)
from cgraph.graph.model import Edge, EdgeKind, Node, NodeKind
from cgraph.graph.store import GraphStore

MAGIC = b"CGKG"
SNAPSHOT_VERSION = 1
EPOCH_ORIGIN = date(2000, 1, 1)

RECORDS_LOG = "records.log"
SNAPSHOT_BIN = "snapshot.bin"
MANIFEST_JSON = "manifest.json"

_NODE_KIND_ORDER = list(NodeKind)
_EDGE_KIND_ORDER = list(EdgeKind)
_NODE_KIND_INDEX = {k: i for i, k in enumerate(_NODE_KIND_ORDER)}
_EDGE_KIND_INDEX = {k: i for i, k in enumerate(_EDGE_KIND_ORDER)}

_FLAG_ENRICHED = 0x01
_FLAG_ASN = 0x02
_FLAG_COUNTRY = 0x04


def _day_offset(day: date) -> int:
    return (day - EPOCH_ORIGIN).days


def _pack_days(days: set[date]) -> bytes:
    """Bitmap of observed days relative to the earliest one."""
    offsets = sorted(_day_offset(d) for d in days)
    base = offsets[0]
    span = offsets[-1] - base + 1
    bitmap = bytearray((span + 7) // 8)
    for off in offsets:
        bit = off - base
        bitmap[bit >> 3] |= 1 << (bit & 7)
    return struct.pack("<iI", base, span) + bytes(bitmap)


def _pack_node(node: Node) -> bytes:
    label_bytes = node.label.encode("utf-8")
    flags = 0
    tail = b""
    if node.enrichment is not None:
        flags |= _FLAG_ENRICHED
        if node.enrichment.asn is not None:
            flags |= _FLAG_ASN
            tail += struct.pack("<I", node.enrichment.asn)
        if node.enrichment.country is not None:
            flags |= _FLAG_COUNTRY
            tail += node.enrichment.country.encode("ascii")
    return (
        struct.pack("<QBH", node.id, _NODE_KIND_INDEX[node.kind], len(label_bytes))
        + label_bytes
        + struct.pack("<B", flags)
        + tail
    )


def _encode_snapshot(store: GraphStore) -> bytes:
    parts = [MAGIC, struct.pack("<H", SNAPSHOT_VERSION)]
    nodes = sorted(store.all_nodes(), key=lambda n: n.id)
    parts.append(struct.pack("<I", len(nodes)))
    parts.extend(_pack_node(n) for n in nodes)
    edges = sorted(
        store.all_edges(), key=lambda e: (e.src, e.dst, _EDGE_KIND_INDEX[e.kind])
    )
    parts.append(struct.pack("<I", len(edges)))
    for edge in edges:
        parts.append(
            struct.pack("<QQBQ", edge.src, edge.dst, _EDGE_KIND_INDEX[edge.kind], edge.total_count)
        )
        parts.append(_pack_days(edge.observed_days))
    parts.append(struct.pack("<Q", len(store.journal)))
    body = b"".join(parts)
    return body + struct.pack("<I", zlib.crc32(body))


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, fmt: str):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.data):
            raise CorruptStore("snapshot body ends prematurely")
        values = struct.unpack_from(fmt, self.data, self.pos)
        self.pos += size
        return values

    def take_bytes(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CorruptStore("snapshot body ends prematurely")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk


def _decode_snapshot(raw: bytes, store: GraphStore) -> int:
    """Populate ``store`` from snapshot bytes; returns records_compacted."""
    if len(raw) < len(MAGIC) + 2 + 4:
        raise CorruptStore("snapshot file too short")
    if raw[: len(MAGIC)] != MAGIC:
        raise CorruptStore("bad magic bytes")
    body, (crc_stored,) = raw[:-4], struct.unpack("<I", raw[-4:])
    if zlib.crc32(body) != crc_stored:
        raise CorruptStore("checksum mismatch")
    reader = _Reader(body)
    reader.take_bytes(len(MAGIC))
    (version,) = reader.take("<H")
    if version != SNAPSHOT_VERSION:
        raise VersionMismatch(f"snapshot version {version}, supported {SNAPSHOT_VERSION}")

    (node_count,) = reader.take("<I")
    for _ in range(node_count):
        node_id, kind_idx, label_len = reader.take("<QBH")
        label = reader.take_bytes(label_len).decode("utf-8")
        (flags,) = reader.take("<B")
        enrichment = None
        if flags & _FLAG_ENRICHED:
            asn = reader.take("<I")[0] if flags & _FLAG_ASN else None
            country = (
                reader.take_bytes(2).decode("ascii") if flags & _FLAG_COUNTRY else None
            )
            enrichment = IpEnrichment(ip=label, asn=asn, country=country)
        try:
            kind = _NODE_KIND_ORDER[kind_idx]
        except IndexError:
            raise CorruptStore(f"unknown node kind index {kind_idx}") from None
        store._restore_node(Node(id=node_id, kind=kind, label=label, enrichment=enrichment))

    (edge_count,) = reader.take("<I")
    for _ in range(edge_count):
        src, dst, kind_idx, total_count = reader.take("<QQBQ")
        base, span = reader.take("<iI")
        bitmap = reader.take_bytes((span + 7) // 8)
        days = set()
        for bit in range(span):
            if bitmap[bit >> 3] & (1 << (bit & 7)):
                days.add(EPOCH_ORIGIN + timedelta(days=base + bit))
        if not days:
            raise CorruptStore("edge with empty day bitmap")
        try:
            kind = _EDGE_KIND_ORDER[kind_idx]
        except IndexError:
            raise CorruptStore(f"unknown edge kind index {kind_idx}") from None
        store._restore_edge(
            Edge(src=src, dst=dst, kind=kind, observed_days=days, total_count=total_count)
        )

    (records_compacted,) = reader.take("<Q")
    if reader.pos != len(body):
        raise CorruptStore("trailing bytes after snapshot payload")
    return records_compacted


def save_store(store: GraphStore, path: str | Path) -> None:
    """Write records.log, snapshot.bin and manifest.json atomically."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)

    log_tmp = root / (RECORDS_LOG + ".tmp")
    with open(log_tmp, "w", encoding="utf-8") as fh:
        for rec in store.journal:
            fh.write(rec.to_json_line() + "\n")
    log_tmp.replace(root / RECORDS_LOG)

    snap_tmp = root / (SNAPSHOT_BIN + ".tmp")
    snap_tmp.write_bytes(_encode_snapshot(store))
    snap_tmp.replace(root / SNAPSHOT_BIN)

    manifest = {
        "format": "cgraph-store",
        "snapshot_version": SNAPSHOT_VERSION,
        "epoch_origin": EPOCH_ORIGIN.isoformat(),
        "node_count": store.node_count,
        "edge_count": store.edge_count,
        "records_compacted": len(store.journal),
        "last_compaction_day": store.latest_day.isoformat() if store.latest_day else None,
    }
    man_tmp = root / (MANIFEST_JSON + ".tmp")
    man_tmp.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    man_tmp.replace(root / MANIFEST_JSON)


def load_store(path: str | Path, psl: PublicSuffixList | None = None) -> GraphStore:
    """Rebuild a store: snapshot first, then replay of appended records."""
    root = Path(path)
    manifest_path = root / MANIFEST_JSON
    snapshot_path = root / SNAPSHOT_BIN
    log_path = root / RECORDS_LOG
    if not manifest_path.exists() or not snapshot_path.exists():
        raise CorruptStore(f"{root} is not a store directory")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorruptStore(f"unreadable manifest: {exc}") from exc
    if manifest.get("format") != "cgraph-store":
        raise CorruptStore("manifest format marker missing")

    store = GraphStore(psl=psl)
    try:
        records_compacted = _decode_snapshot(snapshot_path.read_bytes(), store)
    except struct.error as exc:
        raise CorruptStore(f"undecodable snapshot: {exc}") from exc

    journal: list[NormalizedRecord] = []
    if log_path.exists():
        with open(log_path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    journal.append(NormalizedRecord.from_json_line(line))
                except (ValueError, KeyError) as exc:
                    raise CorruptStore(f"records.log line {lineno}: {exc}") from exc
    if len(journal) < records_compacted:
        raise CorruptStore(
            f"records.log holds {len(journal)} records but snapshot compacted {records_compacted}"
        )
    store.journal = journal
    for rec in journal[records_compacted:]:
        store._apply_record(rec)
    return store


def append_records_to_log(path: str | Path, records: Iterable[NormalizedRecord]) -> int:
    """Append records to the log without recompacting the snapshot.

    The next :func:`load_store` replays them on top of the snapshot.
    """
    root = Path(path)
    n = 0
    with open(root / RECORDS_LOG, "a", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_json_line() + "\n")
            n += 1
    return n


# ---------------- auxiliary feed history under <store>/feeds/ ----------------

FEEDS_DIR = "feeds"
RANKS_CSV = "ranks.csv"
REPUTATION_JSONL = "reputation.jsonl"
ENRICHMENT_CSV = "enrichment.csv"


def feeds_dir(path: str | Path) -> Path:
    return Path(path) / FEEDS_DIR


def append_rank_history(path: str | Path, entries) -> int:
    target = feeds_dir(path)
    target.mkdir(parents=True, exist_ok=True)
    n = 0
    with open(target / RANKS_CSV, "a", encoding="utf-8") as fh:
        for e in entries:
            fh.write(f"{e.day.isoformat()},{e.rank},{e.domain}\n")
            n += 1
    return n


def append_reputation_history(path: str | Path, reports) -> int:
    target = feeds_dir(path)
    target.mkdir(parents=True, exist_ok=True)
    n = 0
    with open(target / REPUTATION_JSONL, "a", encoding="utf-8") as fh:
        for r in reports:
            fh.write(
                json.dumps(
                    {
                        "domain": r.domain,
                        "positives": r.positives,
                        "total": r.total_engines,
                        "scan_date": r.day.isoformat(),
                    },
                    separators=(",", ":"),
                )
                + "\n"
            )
            n += 1
    return n


def append_enrichment_history(path: str | Path, enrichments) -> int:
    target = feeds_dir(path)
    target.mkdir(parents=True, exist_ok=True)
    n = 0
    with open(target / ENRICHMENT_CSV, "a", encoding="utf-8") as fh:
        for item in enrichments:
            fh.write(f"{item.ip},{item.asn or ''},{item.country or ''}\n")
            n += 1
    return n


def load_rank_history(path: str | Path) -> list[RankEntry]:
    source = feeds_dir(path) / RANKS_CSV
    if not source.exists():
        return []
    entries = []
    with open(source, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                day_text, rank_text, domain = line.split(",", 2)
                entries.append(
                    RankEntry(
                        day=date.fromisoformat(day_text),
                        domain=domain.strip(),
                        rank=int(rank_text),
                    )
                )
            except ValueError as exc:
                raise CorruptStore(f"bad rank history line {line!r}") from exc
    return entries


def load_reputation_history(path: str | Path) -> list[ReputationReport]:
    source = feeds_dir(path) / REPUTATION_JSONL
    if not source.exists():
        return []
    reports = []
    with open(source, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            item = parse_reputation_line(line)
            if isinstance(item, Skip):
                raise CorruptStore(f"bad reputation history line: {item.reason}")
            reports.append(item)
    return reports


def load_enrichment_history(path: str | Path) -> list[IpEnrichment]:
    source = feeds_dir(path) / ENRICHMENT_CSV
    if not source.exists():
        return []
    enrichments = []
    with open(source, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            item = parse_enrichment_line(line)
            if isinstance(item, Skip):
                raise CorruptStore(f"bad enrichment history line: {item.reason}")
            enrichments.append(item)
    return enrichments
