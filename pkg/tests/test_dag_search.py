import random

import pytest

from xmlkw.base_search import (
    bwd_elca,
    bwd_slca,
    bwd_slca_plus,
    fwd_elca,
    fwd_slca,
)
from xmlkw.dag_builder import build_idcluster, compress
from xmlkw.dag_search import (
    dag_bwd_elca,
    dag_bwd_slca,
    dag_bwd_slca_plus,
    dag_fwd_elca,
    dag_fwd_slca,
)
from xmlkw.doc_model import parse_document
from xmlkw.oracle import elca_oracle, slca_oracle
from xmlkw.tree_index import build_tree_index

from docgen import random_document, random_query

DAG_SLCA = [dag_fwd_slca, dag_bwd_slca, dag_bwd_slca_plus]
DAG_ELCA = [dag_fwd_elca, dag_bwd_elca]


@pytest.mark.parametrize("algo", DAG_SLCA)
def test_fixture_slca(algo, fixture_cluster):
    assert algo(fixture_cluster, ["USA", "English"]) == [5, 12]


@pytest.mark.parametrize("algo", DAG_ELCA)
def test_fixture_elca(algo, fixture_cluster):
    assert algo(fixture_cluster, ["USA", "English"]) == [2, 5, 12]


def test_fixture_component_searched_once(fixture_cluster):
    for algo in DAG_SLCA + DAG_ELCA:
        visits: dict[int, int] = {}
        algo(fixture_cluster, ["USA", "English"], visits=visits)
        assert visits == {0: 1, 1: 1}, algo.__name__


def test_redundancy_free_document_matches_baseline():
    doc = parse_document(b"<a><b>x y</b><c>y</c><d>x</d></a>")
    idx = build_tree_index(doc)
    cluster = build_idcluster(compress(doc))
    for q in (["x"], ["y"], ["x", "y"]):
        assert dag_fwd_slca(cluster, q) == fwd_slca(idx, q)
        assert dag_fwd_elca(cluster, q) == fwd_elca(idx, q)
        assert dag_bwd_slca_plus(cluster, q) == bwd_slca_plus(idx, q)
        assert dag_bwd_elca(cluster, q) == bwd_elca(idx, q)


@pytest.mark.parametrize("algo", DAG_SLCA + DAG_ELCA)
def test_unknown_keyword_empty(algo, fixture_cluster):
    assert algo(fixture_cluster, ["USA", "zzz-absent"]) == []


@pytest.mark.parametrize("algo", DAG_SLCA + DAG_ELCA)
def test_empty_query_rejected(algo, fixture_cluster):
    with pytest.raises(ValueError):
        algo(fixture_cluster, [])


def test_document_root_only_slca_terminates():
    # Only the document root is SLCA: the search must return without any
    # RCPM expansion instead of looping.
    doc = parse_document(b"<R><a>w1</a><b>w2</b><a>w1</a></R>")
    cluster = build_idcluster(compress(doc))
    assert dag_fwd_slca(cluster, ["w1", "w2"]) == [1]
    assert dag_fwd_elca(cluster, ["w1", "w2"]) == [1]


def test_nested_component_root_only_slca():
    # The x-leaf forms its own component whose single SLCA is its root;
    # its ID doubles as an RCPM key, which the guard must not expand.
    xml = b"<r><x>w</x><dup><x>w</x><y>v</y></dup><dup><x>w</x><y>v</y></dup></r>"
    doc = parse_document(xml)
    cluster = build_idcluster(compress(doc))
    assert slca_oracle(doc, ["w"]) == [2, 4, 7]
    for algo in DAG_SLCA:
        visits: dict[int, int] = {}
        assert algo(cluster, ["w"], visits=visits) == [2, 4, 7], algo.__name__
        # The doubly-referenced component is still searched only once.
        assert all(v == 1 for v in visits.values()), algo.__name__
    assert dag_fwd_elca(cluster, ["w"]) == elca_oracle(doc, ["w"])


def test_component_root_elca_alongside_others():
    # A component whose root is ELCA next to a deeper ELCA in the same
    # component: the root is kept as a result but skipped for expansion.
    xml = b"<R><blk>w1 w2<p>w1 w2</p></blk><blk>w1 w2<p>w1 w2</p></blk></R>"
    doc = parse_document(xml)
    cluster = build_idcluster(compress(doc))
    expected = elca_oracle(doc, ["w1", "w2"])
    assert expected == [2, 3, 4, 5]
    for algo in DAG_ELCA:
        assert algo(cluster, ["w1", "w2"]) == expected, algo.__name__
    assert dag_fwd_slca(cluster, ["w1", "w2"]) == slca_oracle(doc, ["w1", "w2"])


def test_results_are_valid_and_contain_all_keywords():
    rng = random.Random(51)
    for _ in range(40):
        doc = random_document(rng, n_nodes=rng.randint(20, 200))
        cluster = build_idcluster(compress(doc))
        q = random_query(rng)
        out = dag_fwd_slca(cluster, q)
        kws = set(q)
        for nid in out:
            assert 1 <= nid <= doc.node_count
            found = set()
            stack = [nid]
            while stack:
                cur = stack.pop()
                found |= kws.intersection(doc.keywords[cur])
                stack.extend(doc.children(cur))
            assert found == kws


def test_all_dag_variants_match_oracles_random():
    rng = random.Random(52)
    for _ in range(150):
        doc = random_document(rng, n_nodes=rng.randint(20, 200))
        cluster = build_idcluster(compress(doc))
        q = random_query(rng)
        slca_expected = slca_oracle(doc, q)
        elca_expected = elca_oracle(doc, q)
        for algo in DAG_SLCA:
            assert algo(cluster, q) == slca_expected, (algo.__name__, q)
        for algo in DAG_ELCA:
            assert algo(cluster, q) == elca_expected, (algo.__name__, q)


def test_single_visit_per_component_random():
    rng = random.Random(53)
    for _ in range(60):
        doc = random_document(rng, n_nodes=rng.randint(20, 200))
        cluster = build_idcluster(compress(doc))
        q = random_query(rng)
        for algo in (dag_fwd_slca, dag_fwd_elca):
            visits: dict[int, int] = {}
            algo(cluster, q, visits=visits)
            assert all(v == 1 for v in visits.values())


def test_cached_component_results_reused_not_mutated():
    # Two references to one component with different offsets must both
    # resolve from the same cached local results.
    doc = parse_document(b"<a><b><c>w</c></b><b><c>w</c></b></a>")
    cluster = build_idcluster(compress(doc))
    assert dag_fwd_slca(cluster, ["w"]) == [3, 5]
    assert dag_fwd_elca(cluster, ["w"]) == [3, 5]
