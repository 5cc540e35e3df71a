"""
Command-Line Interface
Graph Hallucination Audit - LLM Graph Recall Benchmark

Commands: fetch, stats, diff, gad, rank-compare, spectral, embed, serve.
Exit codes: 0 success, 1 partial (some models failed), 2 usage/config error.
"""

import argparse
import logging
import sys
from typing import List, Optional

from graph_audit import __version__
from graph_audit.config import (
    DEFAULT_OUT_DIR,
    DEFAULT_STORE_DIR,
    GAD_MAX_RESOLUTION,
    HOST,
    LOG_FORMAT,
    PORT,
    REFERENCE_RANKING_PATH,
)
from graph_audit.exceptions import (
    AtlasResolutionError,
    ConfigError,
    GraphSizeError,
    KeySetMismatchError,
    UnknownGraphError,
)
from graph_audit.models.records import AuditConfig
from graph_audit.pipeline.audit_pipeline import AuditPipeline

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_USAGE = 2


def _csv_list(value: str) -> List[str]:
    items = [item.strip() for item in value.split(",") if item.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list")
    return items


def _add_global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--store", default=default(str(DEFAULT_STORE_DIR)), help="Transcript store directory")
    parser.add_argument("--out", default=default(str(DEFAULT_OUT_DIR)), help="Report output directory")
    parser.add_argument("--seed", type=int, default=default(None), help="Seed for label propagation (overrides config)")
    parser.add_argument("--config", default=default(None), help="YAML run configuration")
    parser.add_argument("--verbose", action="store_true", default=default(False), help="Debug logging")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graph-audit",
        description="Measure graph hallucinations in LLM responses",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_global_flags(parser, suppress=False)

    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, suppress=True)
    commands = parser.add_subparsers(dest="command", required=True)

    fetch = commands.add_parser("fetch", parents=[common], help="Fetch (or replay) responses into the store")
    fetch.add_argument("--models", type=_csv_list, required=True, help="Comma-separated model ids")
    fetch.add_argument("--targets", type=_csv_list, required=True, help="Comma-separated catalog keys")
    fetch.add_argument("--replay", action="store_true", help="Serve from the store only; no network")

    stats = commands.add_parser("stats", parents=[common], help="Graph statistics table")
    stats.add_argument("--reference", required=True, help="Catalog key of the reference graph")

    diff = commands.add_parser("diff", parents=[common], help="Edge diff of one model against a reference")
    diff.add_argument("--model", required=True, help="Model id")
    diff.add_argument("--reference", required=True, help="Catalog key of the reference graph")

    gad = commands.add_parser("gad", parents=[common], help="Graph Atlas Distance scores and ranking")
    gad.add_argument(
        "--resolution", type=int, default=GAD_MAX_RESOLUTION, help="Number of atlas graphs to average over"
    )

    rank = commands.add_parser("rank-compare", parents=[common], help="Spearman correlation with a reference ranking")
    rank.add_argument("--reference", default=str(REFERENCE_RANKING_PATH), help="rank,model_id CSV")
    rank.add_argument("--ranking", default=None, help="Computed ranking CSV (default: <out>/gad_ranking.csv)")

    spectral = commands.add_parser("spectral", parents=[common], help="Spectral distances to a reference")
    spectral.add_argument("--reference", required=True, help="Catalog key of the reference graph")

    embed = commands.add_parser("embed", parents=[common], help="Heat-trace signatures and pairwise distances")
    embed.add_argument("--target", default="karate", help="Catalog key whose responses are embedded")

    serve = commands.add_parser("serve", parents=[common], help="Serve stored transcripts over HTTP")
    serve.add_argument("--host", default=HOST)
    serve.add_argument("--port", type=int, default=PORT)
    serve.add_argument("--throttle", type=int, default=0, help="Answer the first N requests with HTTP 429")

    return parser


def _serve(args: argparse.Namespace) -> int:
    import uvicorn

    from graph_audit.client.transcript_store import TranscriptStore
    from graph_audit.server.replay_api import create_app

    store = TranscriptStore(args.store)
    print(f"[INFO] Replaying {len(store)} transcripts at http://{args.host}:{args.port}/chat/completions")
    print("[INFO] Press CTRL+C to stop the server")
    uvicorn.run(create_app(store, throttle_first=args.throttle), host=args.host, port=args.port)
    return EXIT_OK


def run_command(args: argparse.Namespace) -> int:
    """Dispatch a parsed command and map its outcome to an exit code"""
    if args.command == "serve":
        return _serve(args)

    config = AuditConfig.from_yaml(args.config)
    pipeline = AuditPipeline(args.store, args.out, config=config, seed=args.seed)

    if args.command == "fetch":
        manifest = pipeline.cmd_fetch(args.models, args.targets, replay=args.replay)
        print(f"[SUCCESS] Manifest lists {len(manifest.entries)} entries; {manifest.new_fetches} new fetches")
    elif args.command == "stats":
        rows = pipeline.cmd_stats(args.reference)
        print(f"[SUCCESS] Statistics table with {len(rows)} rows")
    elif args.command == "diff":
        report = pipeline.cmd_diff(args.model, args.reference)
        if report is not None:
            print(f"[SUCCESS] {len(report.added)} added, {len(report.missing)} missing edges")
    elif args.command == "gad":
        ranking = pipeline.cmd_gad(args.resolution)
        print(f"[SUCCESS] Ranked {len(ranking.entries)} models; {len(ranking.excluded)} excluded")
    elif args.command == "rank-compare":
        try:
            rho = pipeline.cmd_rank_compare(args.reference, args.ranking)
        except KeySetMismatchError as e:
            print(f"[ERROR] {e}")
            return EXIT_PARTIAL
        print(f"[SUCCESS] Spearman rho = {rho:.4f}")
    elif args.command == "spectral":
        distances = pipeline.cmd_spectral(args.reference)
        print(f"[SUCCESS] Spectral distances for {len(distances)} models")
    elif args.command == "embed":
        names, _ = pipeline.cmd_embed(args.target)
        print(f"[SUCCESS] Signatures for {len(names)} graphs")

    if pipeline.stats['failed']:
        print(f"[WARNING] {pipeline.stats['failed']} failures; see log")
        return EXIT_PARTIAL
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """
    CLI entry point

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format=LOG_FORMAT)

    try:
        return run_command(args)
    except (ConfigError, UnknownGraphError, AtlasResolutionError, GraphSizeError, FileNotFoundError) as e:
        print(f"[ERROR] {e}")
        logger.error(str(e))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
