import random
import struct

import pytest

from xmlkw.dag_builder import IDCluster, build_idcluster, compress
from xmlkw.index_store import (
    CorruptIndexError,
    VersionMismatchError,
    load,
    save,
)
from xmlkw.tree_index import TreeIndex, build_tree_index

from docgen import random_document


def _cluster_equal(a: IDCluster, b: IDCluster) -> bool:
    if a.node_count != b.node_count or a.rcpm != b.rcpm:
        return False
    if len(a.components) != len(b.components):
        return False
    for ca, cb in zip(a.components, b.components):
        if (ca.index, ca.root_id, ca.occurrence_count, ca.members) != (
            cb.index,
            cb.root_id,
            cb.occurrence_count,
            cb.members,
        ):
            return False
        if ca.lists != cb.lists:
            return False
    return True


def test_tree_round_trip(fixture_index, tmp_path):
    path = str(tmp_path / "fixture.idcx")
    nbytes = save(fixture_index, path)
    assert nbytes == (tmp_path / "fixture.idcx").stat().st_size
    loaded = load(path)
    assert isinstance(loaded, TreeIndex)
    assert loaded == fixture_index


def test_cluster_round_trip(fixture_cluster, tmp_path):
    path = str(tmp_path / "fixture-cluster.idcx")
    save(fixture_cluster, path)
    loaded = load(path)
    assert isinstance(loaded, IDCluster)
    assert _cluster_equal(loaded, fixture_cluster)


def test_round_trip_random_indices(tmp_path):
    rng = random.Random(61)
    for i in range(20):
        doc = random_document(rng, n_nodes=rng.randint(10, 120))
        tree = build_tree_index(doc)
        cluster = build_idcluster(compress(doc))
        tpath = str(tmp_path / f"t{i}.idcx")
        cpath = str(tmp_path / f"c{i}.idcx")
        save(tree, tpath)
        save(cluster, cpath)
        assert load(tpath) == tree
        assert _cluster_equal(load(cpath), cluster)


def test_truncated_file_rejected(fixture_index, tmp_path):
    path = tmp_path / "x.idcx"
    save(fixture_index, str(path))
    data = path.read_bytes()
    for cut in (3, 10, len(data) // 2, len(data) - 1):
        path.write_bytes(data[:cut])
        with pytest.raises(CorruptIndexError):
            load(str(path))


def test_trailing_garbage_rejected(fixture_index, tmp_path):
    path = tmp_path / "x.idcx"
    save(fixture_index, str(path))
    path.write_bytes(path.read_bytes() + b"junk")
    with pytest.raises(CorruptIndexError):
        load(str(path))


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "x.idcx"
    path.write_bytes(b"NOPE" + b"\0" * 64)
    with pytest.raises(CorruptIndexError):
        load(str(path))


def test_version_mismatch_rejected(fixture_index, tmp_path):
    path = tmp_path / "x.idcx"
    save(fixture_index, str(path))
    data = bytearray(path.read_bytes())
    data[4:8] = struct.pack("<I", 999)
    path.write_bytes(bytes(data))
    with pytest.raises(VersionMismatchError):
        load(str(path))


def test_unknown_kind_rejected(fixture_index, tmp_path):
    path = tmp_path / "x.idcx"
    save(fixture_index, str(path))
    data = bytearray(path.read_bytes())
    data[8:12] = struct.pack("<I", 7)
    path.write_bytes(bytes(data))
    with pytest.raises(CorruptIndexError):
        load(str(path))


def test_missing_file_is_oserror(tmp_path):
    with pytest.raises(OSError):
        load(str(tmp_path / "absent.idcx"))


def test_file_size_matches_field_accounting(fixture_index, tmp_path):
    path = str(tmp_path / "x.idcx")
    nbytes = save(fixture_index, path)
    keywords = list(fixture_index.lists)
    expected = 4 + 4 + 4 + 4  # magic, version, kind, node_count
    expected += 4 + sum(4 + len(k.encode()) for k in keywords)
    expected += sum(4 + 12 * len(lst) for lst in fixture_index.lists.values())
    assert nbytes == expected


def test_cluster_file_size_matches_field_accounting(fixture_cluster, tmp_path):
    path = str(tmp_path / "c.idcx")
    nbytes = save(fixture_cluster, path)
    keywords = sorted({w for c in fixture_cluster.components for w in c.lists})
    expected = 16  # magic, version, kind, node_count
    expected += 4 + sum(4 + len(k.encode()) for k in keywords)
    expected += 4  # component count
    for comp in fixture_cluster.components:
        expected += 8  # root id, occurrence count
        expected += 4 + 4 * len(comp.members)
        expected += 4 + sum(4 + 4 + 12 * len(lst) for lst in comp.lists.values())
    expected += 4 + 12 * len(fixture_cluster.rcpm)
    assert nbytes == expected


def test_redundancy_free_cluster_size_is_tree_plus_header(tmp_path):
    # Same lists, plus the component table wrapper and an empty RCPM.
    rng = random.Random(62)
    doc = random_document(rng, n_nodes=60, dup_prob=0.0)
    tree = build_tree_index(doc)
    cluster = build_idcluster(compress(doc))
    if len(cluster.components) != 1:  # accidental duplicates: regenerate
        pytest.skip("document happened to contain duplicate subtrees")
    tree_bytes = save(tree, str(tmp_path / "t.idcx"))
    cluster_bytes = save(cluster, str(tmp_path / "c.idcx"))
    n_lists = len(cluster.components[0].lists)
    overhead = (
        4  # component count
        + 8  # root id + occurrence count
        + 4 + 4 * len(cluster.components[0].members)  # member table
        + 4  # list count
        + 4 * n_lists  # keyword index per list replaces nothing in tree
        + 4  # rcpm count
        - 0
    )
    assert cluster_bytes == tree_bytes + overhead
