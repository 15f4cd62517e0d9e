"""Command-line interface: ingest, index, query, eval, serve.

Exit code contract: 0 on success, 1 on user error (bad flags, bad input
files, unusable config), 2 on internal failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from chefmind.errors import ChefMindError, EmptyQuery
from chefmind.evaluation import HeuristicJudge, LLMJudge, load_queries, render_report, run_batches
from chefmind.graph import export_snapshot
from chefmind.pipeline import MODES, run_pipeline
from chefmind.service import load_config, response_to_obj, serve
from chefmind.vectors import save_index


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_data_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; CHEFMIND_* env vars override it")
    p.add_argument("--data", help="recipe corpus (line-delimited JSON)")
    p.add_argument("--aliases", help="ingredient alias sidecar (alias<TAB>canonical)")
    p.add_argument("--lexicon", help="ambiguous-term lexicon, one term per line")
    p.add_argument("--rules", help="scenario rule table (line-delimited JSON)")
    p.add_argument("--dim", type=int, help="embedding dimension (default 768)")


def _config_from_args(args):
    cfg = load_config(getattr(args, "config", None))
    overrides = {}
    if getattr(args, "data", None):
        overrides["corpus_path"] = args.data
    if getattr(args, "aliases", None):
        overrides["aliases_path"] = args.aliases
    if getattr(args, "lexicon", None):
        overrides["lexicon_path"] = args.lexicon
    if getattr(args, "rules", None):
        overrides["rules_path"] = args.rules
    if getattr(args, "dim", None):
        overrides["dimension"] = args.dim
    if overrides:
        cfg = replace(cfg, **overrides)
    return cfg.validated()


def _cmd_ingest(args) -> int:
    from chefmind.corpus import load_corpus

    cfg = _config_from_args(args)
    corpus = load_corpus(
        args.data or cfg.corpus_path,
        strict=not args.lenient,
        aliases_path=args.aliases or cfg.aliases_path,
    )
    stats = corpus.stats
    print(f"recipes: {stats.recipe_count}")
    print(f"ingredients: {stats.ingredient_count}")
    print(f"keywords: {stats.keyword_count}")
    if stats.skipped:
        print(f"skipped: {len(stats.skipped)}")
        for line_no, cause in stats.skipped:
            print(f"  line {line_no}: {cause}")
    if args.snapshot_dir:
        out = Path(args.snapshot_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "corpus.jsonl").write_text(corpus.canonical_jsonl(), encoding="utf-8")
        print(f"snapshot: {out / 'corpus.jsonl'}")
    return 0


def _cmd_index(args) -> int:
    cfg = _config_from_args(args)
    stores = cfg.build_stores()
    out = Path(args.snapshot_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "corpus.jsonl").write_text(stores.corpus.canonical_jsonl(), encoding="utf-8")
    (out / "graph.jsonl").write_text(export_snapshot(stores.graph), encoding="utf-8")
    save_index(stores.index, out / "index.bin")
    print(f"graph: {stores.graph.node_count} nodes, {stores.graph.edge_count} edges")
    print(f"index: {len(stores.index)} fragments at dimension {stores.index.dimension}")
    print(f"snapshots written to {out}")
    return 0


def _cmd_query(args) -> int:
    cfg = _config_from_args(args)
    stores = cfg.build_stores()
    pipeline_config = cfg.pipeline_config(mode=args.mode, candidate_limit=args.k)
    try:
        response, trace = run_pipeline(args.text, pipeline_config, stores)
    except EmptyQuery:
        print("error: query must not be empty", file=sys.stderr)
        return 1

    if args.format == "json":
        print(
            json.dumps(
                {"response": response_to_obj(response), "trace": trace.to_json_obj()},
                ensure_ascii=False,
                indent=2,
            )
        )
        return 0

    if not response.recipes:
        print(f"unprocessed ({trace.unprocessed_reason})")
        return 0
    print(response.narrative)
    print()
    for i, r in enumerate(response.recipes, start=1):
        print(f"{i}. [{r.recipe_id}] {r.name}  level={r.level} score={r.score:.3f}")
        print(f"   {r.reason}")
    if response.degraded:
        print("(narrative degraded: generator unavailable)")
    return 0


def _cmd_eval(args) -> int:
    cfg = _config_from_args(args)
    stores = cfg.build_stores()
    queries = load_queries(args.queries or cfg.queries_path)
    if args.judge == "llm":
        judge = LLMJudge(cfg.build_generator())
    else:
        judge = HeuristicJudge()
    run = run_batches(queries, cfg.pipeline_config(mode=args.mode), stores, judge)
    table, jsonl = render_report(run.batches, run.overall, run.records, mode=run.mode)
    print(table, end="")
    report_path = Path(args.report)
    report_path.write_text(jsonl, encoding="utf-8")
    print(f"report: {report_path}")
    return 0


def _cmd_serve(args) -> int:
    cfg = _config_from_args(args)
    if args.host:
        cfg = replace(cfg, host=args.host)
    if args.port:
        cfg = replace(cfg, port=args.port)
    serve(cfg.validated())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chefmind", description="Hybrid recipe recommendation engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[], help="validate a corpus file and print counts")
    _add_data_options(p)
    p.add_argument("data_positional", nargs="?", metavar="DATA", help="corpus path (same as --data)")
    p.add_argument("--lenient", action="store_true", help="skip bad records instead of failing")
    p.add_argument("--snapshot-dir", help="write a canonical corpus snapshot here")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("index", help="build graph and vector snapshots")
    _add_data_options(p)
    p.add_argument("--snapshot-dir", default="snapshots", help="output directory")
    p.set_defaults(func=_cmd_index)

    p = sub.add_parser("query", help="run one query through the pipeline")
    _add_data_options(p)
    p.add_argument("text", help="query text")
    p.add_argument("--mode", choices=MODES, default="full")
    p.add_argument("--k", type=int, default=None, help="maximum recipes to return")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("eval", help="run the batch evaluation harness")
    _add_data_options(p)
    p.add_argument("--mode", choices=MODES, default="full")
    p.add_argument("--judge", choices=("heuristic", "llm"), default="heuristic")
    p.add_argument("--queries", help="labeled query set (line-delimited JSON)")
    p.add_argument("--report", default="report.jsonl", help="where to write the JSONL report")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("serve", help="start the HTTP service")
    _add_data_options(p)
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    # `ingest DATA` positional doubles as --data for script friendliness
    if getattr(args, "data_positional", None) and not args.data:
        args.data = args.data_positional

    try:
        return args.func(args)
    except ChefMindError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 1
    except Exception as e:  # pragma: no cover - internal failure path
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
