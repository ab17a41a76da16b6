"""Benchmark harness: query classification, timing, savings columns.

Queries fall into three categories. Category 1: no query-relevant node
is compressed, so the DAG variants can only add overhead. Category 2:
relevant nodes are compressed but every common ancestor stays in the
root component. Category 3: at least one nested component contains all
keywords, which is where DAG search pays off.

Timings are means over R runs with a warm cache (one untimed run, which
also cross-checks that every algorithm returns the same result set; a
mismatch aborts the bench).
"""

from __future__ import annotations

import csv
import enum
import time
from dataclasses import dataclass, field
from typing import Callable, TextIO

from . import base_search, dag_search
from .base_search import count_ca
from .dag_builder import IDCluster
from .tree_index import TreeIndex


class QueryCategory(enum.IntEnum):
    CAT1 = 1
    CAT2 = 2
    CAT3 = 3


class BenchMismatchError(RuntimeError):
    """Raised when algorithms disagree on a result set during a bench."""


def classify_query(
    cluster: IDCluster, tree_index: TreeIndex, keywords: list[str]
) -> QueryCategory:
    """Apply the category decision chain (3, then 2, then 1)."""
    if cluster.node_count != tree_index.node_count:
        raise ValueError("indices were built from different documents")
    kws = base_search._dedupe(keywords)
    non_root = cluster.components[1:]
    if any(all(w in comp.lists for w in kws) for comp in non_root):
        return QueryCategory.CAT3
    if any(any(w in comp.lists for w in kws) for comp in non_root):
        return QueryCategory.CAT2
    return QueryCategory.CAT1


# (tree function, dag function, semantics) per algorithm pair name.
ALGORITHM_PAIRS: dict[str, tuple[Callable, Callable, str]] = {
    "FwdSLCA": (base_search.fwd_slca, dag_search.dag_fwd_slca, "slca"),
    "BwdSLCA": (base_search.bwd_slca, dag_search.dag_bwd_slca, "slca"),
    "BwdSLCA+": (base_search.bwd_slca_plus, dag_search.dag_bwd_slca_plus, "slca"),
    "FwdELCA": (base_search.fwd_elca, dag_search.dag_fwd_elca, "elca"),
    "BwdELCA": (base_search.bwd_elca, dag_search.dag_bwd_elca, "elca"),
}
DEFAULT_PAIRS = ["FwdSLCA", "BwdSLCA+", "FwdELCA", "BwdELCA"]


@dataclass(slots=True)
class AlgoTiming:
    algorithm: str  # e.g. "FwdSLCA" or "DagFwdSLCA"
    semantics: str  # "slca" | "elca"
    mean_ms: float
    result_count: int
    component_visits: int  # 0 for tree-based algorithms


@dataclass(slots=True)
class QueryBench:
    keywords: list[str]
    category: QueryCategory
    ca_count: int
    slca_count: int
    elca_count: int
    s_ca: float
    s_slca: float
    s_elca: float
    timings: list[AlgoTiming] = field(default_factory=list)

    @property
    def query_text(self) -> str:
        return " ".join(self.keywords)


def _saving(tree_count: int, dag_count: int) -> float:
    if tree_count == 0:
        return 0.0
    return 100.0 * (1.0 - dag_count / tree_count)


def _time_runs(fn: Callable[[], object], runs: int) -> float:
    t0 = time.perf_counter()
    for _ in range(runs):
        fn()
    return (time.perf_counter() - t0) * 1000.0 / runs


def bench_query(
    tree_index: TreeIndex,
    cluster: IDCluster,
    keywords: list[str],
    runs: int = 100,
    pairs: list[str] | None = None,
) -> QueryBench:
    """Time the selected algorithm pairs on one query.

    The warm-up pass doubles as a correctness gate: all algorithms of one
    semantics must agree with each other, or the bench aborts.
    """
    pair_names = pairs if pairs is not None else DEFAULT_PAIRS
    category = classify_query(cluster, tree_index, keywords)

    ca_tree = count_ca(tree_index, keywords)
    _, ca_dag, slca_dag_local = dag_search.searchable_component_stats(
        cluster, keywords, elca=False
    )
    _, _, elca_dag_local = dag_search.searchable_component_stats(
        cluster, keywords, elca=True
    )
    slca_ref = base_search.fwd_slca(tree_index, keywords)
    elca_ref = base_search.fwd_elca(tree_index, keywords)
    reference = {"slca": slca_ref, "elca": elca_ref}

    report = QueryBench(
        keywords=list(keywords),
        category=category,
        ca_count=ca_tree,
        slca_count=len(slca_ref),
        elca_count=len(elca_ref),
        s_ca=_saving(ca_tree, ca_dag),
        s_slca=_saving(len(slca_ref), slca_dag_local),
        s_elca=_saving(len(elca_ref), elca_dag_local),
    )

    for name in pair_names:
        tree_fn, dag_fn, semantics = ALGORITHM_PAIRS[name]
        expected = reference[semantics]
        tree_out = tree_fn(tree_index, keywords)  # warm + correctness
        visits: dict[int, int] = {}
        dag_out = dag_fn(cluster, keywords, visits=visits)
        if tree_out != expected or dag_out != expected:
            raise BenchMismatchError(
                f"{name}: result sets disagree on query {' '.join(keywords)!r}"
            )
        report.timings.append(
            AlgoTiming(
                algorithm=name,
                semantics=semantics,
                mean_ms=_time_runs(lambda: tree_fn(tree_index, keywords), runs),
                result_count=len(tree_out),
                component_visits=0,
            )
        )
        report.timings.append(
            AlgoTiming(
                algorithm="Dag" + name,
                semantics=semantics,
                mean_ms=_time_runs(lambda: dag_fn(cluster, keywords), runs),
                result_count=len(dag_out),
                component_visits=sum(visits.values()),
            )
        )
    return report


def run_bench(
    tree_index: TreeIndex,
    cluster: IDCluster,
    queries: list[list[str]],
    runs: int = 100,
    pairs: list[str] | None = None,
) -> list[QueryBench]:
    return [bench_query(tree_index, cluster, q, runs, pairs) for q in queries]


def load_queries(path: str) -> list[list[str]]:
    """One query per line, whitespace-separated keywords, '#' comments."""
    queries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                queries.append(line.split())
    return queries


def format_table(reports: list[QueryBench]) -> str:
    """Render bench reports as an aligned text table."""
    header = (
        f"{'query':<28} {'cat':>3} {'algorithm':<12} {'mean_ms':>10} "
        f"{'results':>9} {'visits':>7} {'S_ca':>6} {'S_slca':>7} {'S_elca':>7}"
    )
    lines = [header, "-" * len(header)]
    for rep in reports:
        for t in rep.timings:
            lines.append(
                f"{rep.query_text:<28.28} {rep.category.value:>3} "
                f"{t.algorithm:<12} {t.mean_ms:>10.3f} {t.result_count:>9} "
                f"{t.component_visits:>7} {rep.s_ca:>5.0f}% "
                f"{rep.s_slca:>6.0f}% {rep.s_elca:>6.0f}%"
            )
    return "\n".join(lines)


def write_csv(reports: list[QueryBench], fh: TextIO) -> None:
    writer = csv.writer(fh)
    writer.writerow(
        [
            "query", "category", "algorithm", "semantics", "mean_ms",
            "result_count", "component_visits", "ca_count",
            "s_ca_pct", "s_slca_pct", "s_elca_pct",
        ]
    )
    for rep in reports:
        for t in rep.timings:
            writer.writerow(
                [
                    rep.query_text, rep.category.value, t.algorithm, t.semantics,
                    f"{t.mean_ms:.6f}", t.result_count, t.component_visits,
                    rep.ca_count, f"{rep.s_ca:.2f}", f"{rep.s_slca:.2f}",
                    f"{rep.s_elca:.2f}",
                ]
            )
