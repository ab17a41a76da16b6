import random

from xmlkw.doc_model import parse_document
from xmlkw.oracle import containment_oracle
from xmlkw.tree_index import build_tree_index, idlist_lookup

from docgen import random_document


def test_fixture_usa_list(fixture_doc, fixture_index):
    lst = fixture_index.lookup("USA")
    assert len(lst) == 7
    assert set(lst.ids) >= {1, 2, 4, 5, 11, 12}
    # Root N_Desc equals the number of nodes directly containing USA.
    direct = sum(1 for i in fixture_doc.iter_ids() if "USA" in fixture_doc.keywords[i])
    assert lst.ids[0] == 1 and lst.n_desc[0] == direct == 3


def test_single_node_document():
    doc = parse_document(b"<a>w</a>")
    idx = build_tree_index(doc)
    assert idx.lookup("w").entries() == [(1, -1, 1)]


def test_absent_keyword_empty():
    doc = parse_document(b"<a>w</a>")
    idx = build_tree_index(doc)
    assert len(idlist_lookup(idx, "zzz-absent")) == 0
    assert len(idlist_lookup(idx, "")) == 0


def test_lookup_never_fails(fixture_index):
    assert len(idlist_lookup(fixture_index, "USA")) > 0
    assert idlist_lookup(fixture_index, "nope").entries() == []


def test_lists_sorted_and_pid_pos_points_up(fixture_index):
    for lst in fixture_index.lists.values():
        ids = list(lst.ids)
        assert ids == sorted(ids)
        for pos, pp in enumerate(lst.pid_pos):
            if pp >= 0:
                assert lst.ids[pp] < lst.ids[pos]
            else:
                assert lst.ids[pos] == 1  # only the document root


def test_matches_containment_oracle_random():
    rng = random.Random(11)
    for _ in range(40):
        doc = random_document(rng, n_nodes=rng.randint(20, 150))
        idx = build_tree_index(doc)
        keywords = {w for i in doc.iter_ids() for w in doc.keywords[i]}
        for w in keywords:
            assert list(idx.lookup(w).ids) == containment_oracle(doc, w)


def test_n_desc_matches_bottom_up_recount():
    rng = random.Random(12)
    for _ in range(25):
        doc = random_document(rng, n_nodes=rng.randint(20, 150))
        idx = build_tree_index(doc)
        for w, lst in idx.lists.items():
            # Independent recount: direct hits summed over each subtree.
            totals = [0] + [
                1 if w in doc.keywords[i] else 0
                for i in range(1, doc.node_count + 1)
            ]
            for i in range(doc.node_count, 1, -1):
                totals[doc.parents[i]] += totals[i]
            for pos, nid in enumerate(lst.ids):
                assert lst.n_desc[pos] == totals[nid] >= 1


def test_entry_count_accounting():
    rng = random.Random(13)
    doc = random_document(rng, n_nodes=100)
    idx = build_tree_index(doc)
    expected = sum(len(containment_oracle(doc, w)) for w in idx.lists)
    assert idx.total_entries() == expected
