"""Command-line front end.

Thin client over the library: build stores from feed files, extract
weekly seed sets, run one-off inferences, search, and launch the HTTP
service. Store, seed file, and listen address fall back to the
CGRAPH_STORE / CGRAPH_SEEDS / CGRAPH_LISTEN environment variables.
"""

import json
import logging
from collections import defaultdict
from datetime import timedelta
from pathlib import Path

import click

from cgraph.errors import CgraphError
from cgraph.graph.persistence import (
    MANIFEST_JSON,
    append_enrichment_history,
    append_rank_history,
    append_reputation_history,
    load_store,
    save_store,
)
from cgraph.graph.store import GraphStore
from cgraph.inference.engine import infer_domain
from cgraph.ingest.adapters import (
    Skip,
    read_enrichment_file,
    read_pdns_file,
    read_rank_file,
    read_reputation_file,
)
from cgraph.ingest.seeds import (
    build_seed_set,
    extract_benign_seeds,
    extract_malicious_seeds,
    load_seed_set,
    save_seed_set,
)
from cgraph.service.app import create_app
from cgraph.service.state import ServiceState

logger = logging.getLogger(__name__)

ADAPTERS = ("pdns", "rank", "reputation", "enrichment")

store_option = click.option(
    "--store",
    "store_dir",
    envvar="CGRAPH_STORE",
    required=True,
    type=click.Path(file_okay=False),
    help="Store directory (env: CGRAPH_STORE).",
)
seeds_option = click.option(
    "--seeds",
    "seeds_path",
    envvar="CGRAPH_SEEDS",
    type=click.Path(dir_okay=False),
    help="Seed-set JSON file (env: CGRAPH_SEEDS).",
)


def _open_store(store_dir: str) -> GraphStore:
    if (Path(store_dir) / MANIFEST_JSON).exists():
        return load_store(store_dir)
    return GraphStore()


def _echo_skips(skips: list[Skip]) -> None:
    for skip in skips[:10]:
        click.echo(f"  skipped: {skip.reason}", err=True)
    if len(skips) > 10:
        click.echo(f"  ... and {len(skips) - 10} more skipped lines", err=True)


@click.group()
@click.version_option(package_name="cgraph")
def main():
    """Domain threat-intelligence graph toolkit."""
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--adapter", type=click.Choice(ADAPTERS), default="pdns", show_default=True)
@store_option
def ingest(files, adapter, store_dir):
    """Ingest feed FILES into the store under the chosen adapter."""
    try:
        if adapter == "pdns":
            store = _open_store(store_dir)
            total, skips = 0, []
            for path in files:
                for item in read_pdns_file(path):
                    if isinstance(item, Skip):
                        skips.append(item)
                    else:
                        store.upsert_record(item)
                        total += 1
            save_store(store, store_dir)
            click.echo(
                f"ingested {total} records ({len(skips)} skipped); "
                f"store now has {store.node_count} nodes, {store.edge_count} edges"
            )
        elif adapter == "rank":
            entries, skips = [], []
            for path in files:
                for item in read_rank_file(path):
                    (skips if isinstance(item, Skip) else entries).append(item)
            append_rank_history(store_dir, entries)
            click.echo(f"appended {len(entries)} rank entries ({len(skips)} skipped)")
        elif adapter == "reputation":
            reports, skips = [], []
            for path in files:
                for item in read_reputation_file(path):
                    (skips if isinstance(item, Skip) else reports).append(item)
            append_reputation_history(store_dir, reports)
            click.echo(f"appended {len(reports)} reports ({len(skips)} skipped)")
        else:
            enrichments, skips = [], []
            for path in files:
                for item in read_enrichment_file(path):
                    (skips if isinstance(item, Skip) else enrichments).append(item)
            append_enrichment_history(store_dir, enrichments)
            if (Path(store_dir) / MANIFEST_JSON).exists():
                store = load_store(store_dir)
                store.apply_enrichment(enrichments)
                save_store(store, store_dir)
            click.echo(f"appended {len(enrichments)} enrichment rows ({len(skips)} skipped)")
        _echo_skips(skips)
    except CgraphError as exc:
        raise click.ClickException(str(exc)) from exc


@main.group()
def seed():
    """Seed-set extraction."""


@seed.command("build")
@click.option("--ranks", "ranks_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--reports", "reports_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--rank-threshold", default=10000, show_default=True)
@click.option("--min-positives", default=3, show_default=True)
def seed_build(ranks_dir, reports_dir, out_path, rank_threshold, min_positives):
    """Extract a 7-day seed set from rank CSVs and reputation reports.

    The window comes from the rank files (one CSV per day, exactly 7
    consecutive days); reports outside that window are ignored.
    """
    rank_feeds = defaultdict(list)
    for path in sorted(Path(ranks_dir).glob("*.csv")):
        for item in read_rank_file(path):
            if not isinstance(item, Skip):
                rank_feeds[item.day].append(item)
    if not rank_feeds:
        raise click.ClickException(f"no YYYY-MM-DD.csv rank files in {ranks_dir}")
    window_start, window_end = min(rank_feeds), max(rank_feeds)

    report_feeds = {
        window_start + timedelta(days=i): []
        for i in range((window_end - window_start).days + 1)
    }
    dropped = 0
    for path in sorted(Path(reports_dir).iterdir()):
        if path.is_file():
            for item in read_reputation_file(path):
                if isinstance(item, Skip):
                    continue
                if item.day in report_feeds:
                    report_feeds[item.day].append(item)
                else:
                    dropped += 1
    if dropped:
        click.echo(f"  ignored {dropped} reports outside the rank window", err=True)

    try:
        benign = extract_benign_seeds(rank_feeds, rank_threshold=rank_threshold)
        malicious = extract_malicious_seeds(report_feeds, min_positives=min_positives)
        seeds = build_seed_set(benign, malicious, window_start, window_end)
    except (CgraphError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    save_seed_set(seeds, out_path)
    click.echo(
        f"wrote {out_path}: {len(seeds.benign)} benign, {len(seeds.malicious)} "
        f"malicious ({seeds.window_start} .. {seeds.window_end})"
    )


@main.command()
@click.argument("domain")
@store_option
@seeds_option
@click.option("--hops", default=2, show_default=True, type=click.IntRange(0, 3))
def infer(domain, store_dir, seeds_path, hops):
    """Score DOMAIN from its k-hop neighborhood; prints JSON."""
    if not seeds_path:
        raise click.UsageError("--seeds (or CGRAPH_SEEDS) is required")
    try:
        store = load_store(store_dir)
        seeds = load_seed_set(seeds_path)
        inference = infer_domain(store, domain.strip().lower(), seeds, hops=hops)
    except (CgraphError, OSError, KeyError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    result = inference.result
    click.echo(
        json.dumps(
            {
                "domain": inference.domain,
                "score": round(inference.score, 6),
                "verdict": inference.verdict.value,
                "converged": result.converged,
                "iterations_used": result.iterations_used,
                "nodes": len(inference.subgraph.nodes),
                "seed_count": {
                    "benign": result.seed_count[0],
                    "malicious": result.seed_count[1],
                },
            }
        )
    )


@main.command()
@click.argument("keyword")
@store_option
@click.option("--limit", default=25, show_default=True, type=click.IntRange(1, 100))
def search(keyword, store_dir, limit):
    """Substring search over domain labels; prints JSON."""
    try:
        state = ServiceState.from_paths(store_dir)
    except (CgraphError, OSError, KeyError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    hits = state.store.search_domains(keyword, limit, state.reputation)
    click.echo(
        json.dumps(
            [
                {"domain": h.domain, "kind": h.kind.value, "positives": h.positives}
                for h in hits
            ]
        )
    )


@main.command()
@store_option
@seeds_option
@click.option(
    "--listen",
    envvar="CGRAPH_LISTEN",
    default="127.0.0.1:8000",
    show_default=True,
    help="host:port to bind (env: CGRAPH_LISTEN).",
)
def serve(store_dir, seeds_path, listen):
    """Run the HTTP API."""
    import uvicorn

    host, _, port_text = listen.rpartition(":")
    if not host or not port_text.isdigit():
        raise click.UsageError(f"--listen must be host:port, got {listen!r}")
    try:
        state = ServiceState.from_paths(store_dir, seeds_path)
    except (CgraphError, OSError, KeyError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    app = create_app(state)
    uvicorn.run(app, host=host, port=int(port_text), log_level="info")


if __name__ == "__main__":
    main()
