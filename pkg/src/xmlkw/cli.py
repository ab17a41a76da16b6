"""Command-line interface: index building, querying, stats, benchmarks."""

from __future__ import annotations

import argparse
import sys

from . import base_search, bench, dag_search
from .corpus import generate_corpus, scale_corpus
from .dag_builder import IDCluster, build_idcluster, compress, savings_report
from .doc_model import ParseError, parse_path
from .index_store import IndexStoreError, load, save
from .tree_index import TreeIndex, build_tree_index

_TREE_ALGOS = {
    ("slca", "fwd"): base_search.fwd_slca,
    ("slca", "bwd"): base_search.bwd_slca,
    ("slca", "bwd+"): base_search.bwd_slca_plus,
    ("elca", "fwd"): base_search.fwd_elca,
    ("elca", "bwd"): base_search.bwd_elca,
    ("elca", "bwd+"): base_search.bwd_elca,  # BwdELCA already narrows searches
}
_DAG_ALGOS = {
    ("slca", "fwd"): dag_search.dag_fwd_slca,
    ("slca", "bwd"): dag_search.dag_bwd_slca,
    ("slca", "bwd+"): dag_search.dag_bwd_slca_plus,
    ("elca", "fwd"): dag_search.dag_fwd_elca,
    ("elca", "bwd"): dag_search.dag_bwd_elca,
    ("elca", "bwd+"): dag_search.dag_bwd_elca,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xmlkw",
        description="Keyword search over XML documents (SLCA/ELCA semantics), "
        "with baseline and DAG-compressed indices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build an index file from an XML document")
    p.add_argument("xml_path", help="XML file path, or '-' for stdin")
    p.add_argument("--out", required=True, help="output index path")
    p.add_argument("--kind", choices=["tree", "cluster"], default="tree")

    p = sub.add_parser("query", help="run a keyword query against an index file")
    p.add_argument("index_path")
    p.add_argument("--semantics", choices=["slca", "elca"], default="slca")
    p.add_argument("--algo", choices=["fwd", "bwd", "bwd+"], default="fwd")
    p.add_argument("--keywords", nargs="+", required=True, metavar="KEYWORD")

    p = sub.add_parser("stats", help="index-size comparison for a document")
    p.add_argument("xml_path")
    p.add_argument("--top", type=int, default=20, help="keywords to list (by size)")

    p = sub.add_parser("bench", help="time baseline vs DAG algorithms")
    p.add_argument("xml_path")
    p.add_argument("--queries", required=True, help="query file: one query per line")
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--pairs", default=",".join(bench.DEFAULT_PAIRS),
                   help="comma-separated algorithm pairs (e.g. FwdSLCA,FwdELCA)")
    p.add_argument("--csv", metavar="PATH", help="also write results as CSV")

    p = sub.add_parser("scale", help="keep the first fraction of the records")
    p.add_argument("xml_path")
    p.add_argument("--fraction", type=float, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("gen", help="generate a synthetic benchmark corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--megabytes", type=float, default=100.0)
    p.add_argument("--records", type=int, default=None,
                   help="exact record count (overrides --megabytes)")
    p.add_argument("--dup-ratio", type=float, default=0.45)
    p.add_argument("--seed", type=int, default=42)
    return parser


def _cmd_index(args) -> int:
    doc = parse_path(args.xml_path)
    if args.kind == "tree":
        index = build_tree_index(doc)
    else:
        index = build_idcluster(compress(doc))
    nbytes = save(index, args.out)
    print(f"wrote {args.out} ({args.kind}, {nbytes} bytes, {doc.node_count} nodes)")
    return 0


def _cmd_query(args) -> int:
    index = load(args.index_path)
    key = (args.semantics, args.algo)
    if isinstance(index, TreeIndex):
        results = _TREE_ALGOS[key](index, args.keywords)
    else:
        results = _DAG_ALGOS[key](index, args.keywords)
    for node_id in results:
        print(node_id)
    print(f"count={len(results)}")
    return 0


def _cmd_stats(args) -> int:
    doc = parse_path(args.xml_path)
    tree_index = build_tree_index(doc)
    cluster = build_idcluster(compress(doc))
    stats = savings_report(tree_index, cluster)
    print(f"document nodes:        {stats.node_count}")
    print(f"tree index entries:    {stats.tree_total}")
    print(f"cluster entries:       {stats.cluster_total} (dummies included)")
    print(f"RCPM entries:          {stats.rcpm_entries}")
    print(f"total entry saving:    {stats.total_saving_pct:.1f}%")
    print(f"tree bytes  (SLCA/ELCA):    {stats.tree_bytes_slca} / {stats.tree_bytes_elca}")
    print(f"cluster bytes (SLCA/ELCA):  {stats.cluster_bytes_slca} / {stats.cluster_bytes_elca}")
    print()
    shown = stats.per_keyword[: args.top] if args.top >= 0 else stats.per_keyword
    width = max((len(r.keyword) for r in shown), default=7)
    width = max(width, 7)
    print(f"{'keyword':<{width}} {'tree':>10} {'cluster':>10} {'saving':>8}")
    for row in shown:
        print(
            f"{row.keyword:<{width}} {row.tree_entries:>10} "
            f"{row.cluster_entries:>10} {row.saving_pct:>7.1f}%"
        )
    return 0


def _cmd_bench(args) -> int:
    queries = bench.load_queries(args.queries)
    if not queries:
        print("query file contains no queries", file=sys.stderr)
        return 1
    pair_names = [p.strip() for p in args.pairs.split(",") if p.strip()]
    unknown = [p for p in pair_names if p not in bench.ALGORITHM_PAIRS]
    if unknown:
        print(f"unknown algorithm pairs: {', '.join(unknown)}", file=sys.stderr)
        return 1
    doc = parse_path(args.xml_path)
    tree_index = build_tree_index(doc)
    cluster = build_idcluster(compress(doc))
    del doc
    reports = bench.run_bench(tree_index, cluster, queries, args.runs, pair_names)
    print(bench.format_table(reports))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            bench.write_csv(reports, fh)
        print(f"\ncsv written to {args.csv}")
    return 0


def _cmd_scale(args) -> int:
    out = scale_corpus(args.xml_path, args.fraction, args.out)
    print(f"wrote {out}")
    return 0


def _cmd_gen(args) -> int:
    info = generate_corpus(
        args.out,
        target_bytes=int(args.megabytes * (1 << 20)),
        records=args.records,
        dup_ratio=args.dup_ratio,
        seed=args.seed,
    )
    print(
        f"wrote {info.path}: {info.records} records "
        f"({info.duplicated_records} duplicated), {info.bytes_written} bytes"
    )
    return 0


_COMMANDS = {
    "index": _cmd_index,
    "query": _cmd_query,
    "stats": _cmd_stats,
    "bench": _cmd_bench,
    "scale": _cmd_scale,
    "gen": _cmd_gen,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (OSError, ParseError, IndexStoreError, ValueError, bench.BenchMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
