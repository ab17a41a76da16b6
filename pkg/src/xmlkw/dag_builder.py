"""Two-pass construction of the DAG-compressed index.

Pass 1 (compress) merges repeated subtrees bottom-up: two nodes are
identical when they directly contain the same keywords and their child
lists are identical, in order. The first occurrence is kept; each later
occurrence is replaced by an offset edge whose offset is the difference
between the removed and the kept root IDs. Every kept node records how
many original occurrences it stands for.

Pass 2 (build_idcluster) partitions the DAG into redundancy components,
the maximal connected regions of equal occurrence count; the component
holding the document root is component 0. Each component gets its own
per-keyword IDLists. An edge from a component into a nested component
contributes a dummy entry (ID = nested root ID + edge offset) to the
referencing component's lists for every keyword the nested component
contains, and one entry in the global RCPM mapping that dummy ID to
(nested component, offset).
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field

from .doc_model import DocumentTree
from .tree_index import IDList, TreeIndex


@dataclass(slots=True)
class DagNode:
    """One shared node of the compressed DAG."""

    id: int  # pre-order ID of the first occurrence
    label: str
    is_attr: bool
    keywords: tuple[str, ...]
    children: list[tuple[int, int]]  # (child canonical ID, edge offset)
    occurrence_count: int


class CompressedDag:
    """Result of pass 1; unfolding it reproduces the original tree."""

    __slots__ = ("nodes", "node_count", "canonical_of")

    def __init__(self, nodes: dict[int, DagNode], node_count: int, canonical_of: array):
        self.nodes = nodes
        self.node_count = node_count
        self.canonical_of = canonical_of  # original ID -> canonical ID

    @property
    def root(self) -> int:
        return 1

    def __repr__(self) -> str:
        return f"<CompressedDag shared={len(self.nodes)} original={self.node_count}>"


def compress(doc: DocumentTree) -> CompressedDag:
    """Merge identical subtrees in one bottom-up pass (hash consing).

    Node identity is (direct keyword set, ordered child identities);
    labels matter only through their tokens. Reverse pre-order visits
    children before parents, so child identities are always resolved.
    """
    n = doc.node_count
    parents = doc.parents
    kws = doc.keywords
    ch: list[list[int]] = [[] for _ in range(n + 1)]
    for i in range(2, n + 1):
        ch[parents[i]].append(i)

    # Reverse pre-order resolves children before parents; the class
    # representative found this way is arbitrary, so a second linear pass
    # re-points every class to its first occurrence (smallest ID), which
    # is the node that must be kept.
    canon = array("i", bytes(4 * (n + 1)))
    occ: dict[int, int] = {}
    key_map: dict[tuple, int] = {}
    for i in range(n, 0, -1):
        key = (kws[i], tuple(canon[c] for c in ch[i]))
        hit = key_map.get(key)
        if hit is None:
            key_map[key] = i
            canon[i] = i
            occ[i] = 1
        else:
            canon[i] = hit
            occ[hit] += 1
    del key_map
    first_of: dict[int, int] = {}
    for i in range(1, n + 1):  # ascending, so the first hit is the minimum
        rep = canon[i]
        keep = first_of.get(rep)
        if keep is None:
            first_of[rep] = i
            keep = i
        canon[i] = keep

    labels = doc.labels
    attr = doc.attr_flags
    nodes: dict[int, DagNode] = {}
    for rep, i in first_of.items():
        nodes[i] = DagNode(
            id=i,
            label=labels[i],
            is_attr=bool(attr[i]),
            keywords=kws[i],
            children=[(canon[c], c - canon[c]) for c in ch[i]],
            occurrence_count=occ[rep],
        )
    return CompressedDag(nodes, n, canon)


def unfold(dag: CompressedDag) -> DocumentTree:
    """Reconstruct the original tree, recomputing IDs from edge offsets.

    Raises ValueError if the offsets do not produce the exact original
    pre-order numbering (which would indicate a corrupt DAG).
    """
    n = dag.node_count
    labels: list[str | None] = [None] * (n + 1)
    parents = array("i", bytes(4 * (n + 1)))
    keywords: list[tuple[str, ...] | None] = [None] * (n + 1)
    attrs = bytearray(n + 1)
    stack = [(dag.root, 0, 0)]  # (canonical ID, accumulated offset, parent unfolded ID)
    count = 0
    while stack:
        nid, off, parent = stack.pop()
        uid = nid + off
        if not 1 <= uid <= n or labels[uid] is not None:
            raise ValueError(f"unfolding produced invalid or duplicate ID {uid}")
        node = dag.nodes[nid]
        labels[uid] = node.label
        parents[uid] = parent
        keywords[uid] = node.keywords
        attrs[uid] = 1 if node.is_attr else 0
        count += 1
        for c, cos in reversed(node.children):
            stack.append((c, off + cos, uid))
    if count != n:
        raise ValueError(f"unfolding produced {count} nodes, expected {n}")
    return DocumentTree(labels, parents, keywords, attrs)


@dataclass(slots=True)
class RedundancyComponent:
    """A maximal connected equal-occurrence-count region of the DAG."""

    index: int
    root_id: int
    occurrence_count: int
    members: list[int]  # canonical IDs, ascending
    lists: dict[str, IDList] = field(default_factory=dict)

    def total_entries(self) -> int:
        return sum(len(lst) for lst in self.lists.values())


class IDCluster:
    """Per-component IDLists plus the global dummy-ID pointer map."""

    __slots__ = ("components", "rcpm", "node_count")

    def __init__(
        self,
        components: list[RedundancyComponent],
        rcpm: dict[int, tuple[int, int]],
        node_count: int,
    ):
        self.components = components
        self.rcpm = rcpm  # dummy ID -> (component index, offset)
        self.node_count = node_count

    def total_entries(self) -> int:
        return sum(c.total_entries() for c in self.components)

    def keyword_entries(self, keyword: str) -> int:
        return sum(
            len(c.lists[keyword]) for c in self.components if keyword in c.lists
        )

    def __repr__(self) -> str:
        return (
            f"<IDCluster components={len(self.components)} "
            f"entries={self.total_entries()} rcpm={len(self.rcpm)}>"
        )


def _postorder_ranks(dag: CompressedDag) -> dict[int, int]:
    """Rank every DAG node with children before parents."""
    rank: dict[int, int] = {}
    seen: set[int] = set()
    stack: list[tuple[int, int]] = [(dag.root, 0)]
    while stack:
        nid, phase = stack.pop()
        if phase:
            rank[nid] = len(rank)
            continue
        if nid in seen:
            continue
        seen.add(nid)
        stack.append((nid, 1))
        for c, _ in dag.nodes[nid].children:
            if c not in seen:
                stack.append((c, 0))
    return rank


def build_idcluster(dag: CompressedDag) -> IDCluster:
    """Pass 2: components, per-component IDLists with dummies, RCPM."""
    nodes = dag.nodes

    # An equal-count edge implies its target has that edge as its only
    # incoming edge (counts add up over incoming edges), so the equal-count
    # subgraph is a forest: component roots are the nodes without an
    # equal-count incoming edge, and membership follows unique parents.
    comp_parent: dict[int, int] = {}
    crossing: list[tuple[int, int, int]] = []  # (source, target, offset)
    for nid, node in nodes.items():
        occ = node.occurrence_count
        for c, off in node.children:
            if nodes[c].occurrence_count == occ:
                if c in comp_parent:
                    raise AssertionError(
                        f"node {c} has two equal-count parents; counts corrupt"
                    )
                comp_parent[c] = nid
            else:
                crossing.append((nid, c, off))

    roots = sorted(nid for nid in nodes if nid not in comp_parent)
    if dag.root not in roots:
        raise AssertionError("document root is not a component root")
    roots.remove(dag.root)
    roots.insert(0, dag.root)  # component 0 holds the document root

    comp_of: dict[int, int] = {}
    comp_children: dict[int, list[int]] = {}
    for c, p in comp_parent.items():
        comp_children.setdefault(p, []).append(c)
    components: list[RedundancyComponent] = []
    for idx, root_id in enumerate(roots):
        members = []
        stack = [root_id]
        while stack:
            m = stack.pop()
            members.append(m)
            comp_of[m] = idx
            stack.extend(comp_children.get(m, ()))
        members.sort()
        components.append(
            RedundancyComponent(
                index=idx,
                root_id=root_id,
                occurrence_count=nodes[root_id].occurrence_count,
                members=members,
            )
        )

    # Crossing edges become dummies; each dummy ID is the original ID of
    # the occurrence the edge stands for, hence globally unique.
    rcpm: dict[int, tuple[int, int]] = {}
    crossing_src: dict[int, int] = {}  # dummy ID -> referencing member
    crossing_by_target: dict[int, list[tuple[int, int, int]]] = {}
    for src, target, off in crossing:
        dummy_id = target + off
        if dummy_id in rcpm:
            raise AssertionError(f"duplicate dummy ID {dummy_id}")
        rcpm[dummy_id] = (comp_of[target], off)
        crossing_src[dummy_id] = src
        crossing_by_target.setdefault(target, []).append((src, dummy_id, off))

    # Per-keyword containment over the DAG, then per-component lists.
    directs: dict[str, list[int]] = {}
    for nid, node in nodes.items():
        for w in node.keywords:
            directs.setdefault(w, []).append(nid)
    rev: dict[int, list[int]] = {}
    for nid, node in nodes.items():
        last = None
        for c, _ in node.children:
            if c != last:  # a parent referencing c twice counts once here
                rev.setdefault(c, []).append(nid)
                last = c

    ranks = _postorder_ranks(dag)
    for w, direct_nodes in directs.items():
        direct_set = set(direct_nodes)
        containing = set(direct_nodes)
        stack = list(direct_nodes)
        while stack:
            x = stack.pop()
            for p in rev.get(x, ()):
                if p not in containing:
                    containing.add(p)
                    stack.append(p)
        # Per-occurrence direct-containment counts, children first. Each
        # child edge contributes once: occurrences inside one unfolded
        # occurrence of the parent.
        cnt: dict[int, int] = {}
        for x in sorted(containing, key=ranks.__getitem__):
            total = 1 if x in direct_set else 0
            for c, _ in nodes[x].children:
                total += cnt.get(c, 0)
            cnt[x] = total

        per_comp: dict[int, list[tuple[int, int]]] = {}
        for x in containing:
            per_comp.setdefault(comp_of[x], []).append((x, cnt[x]))
            if x in crossing_by_target:
                for src, dummy_id, off in crossing_by_target[x]:
                    per_comp.setdefault(comp_of[src], []).append((dummy_id, cnt[x]))

        for idx, entries in per_comp.items():
            entries.sort()
            ids = array("i", (e[0] for e in entries))
            n_desc = array("i", (e[1] for e in entries))
            pos_of = {nid: i for i, nid in enumerate(ids)}
            pid_pos = array("i", bytes(4 * len(ids)))
            for i, nid in enumerate(ids):
                ref = rcpm.get(nid)
                if ref is not None and ref[0] != idx:
                    parent = crossing_src[nid]  # dummy: parent is the edge source
                else:
                    parent = comp_parent.get(nid, 0)
                pid_pos[i] = pos_of.get(parent, -1)
            components[idx].lists[w] = IDList(ids, pid_pos, n_desc)

    return IDCluster(components, rcpm, dag.node_count)


# Size model: 2 integers per entry suffice for SLCA search (ID, PIDPos),
# 3 for ELCA (plus N_Desc); RCPM entries cost 2 integers; 4 bytes each.
INT_BYTES = 4
SLCA_INTS_PER_ENTRY = 2
ELCA_INTS_PER_ENTRY = 3
RCPM_INTS_PER_ENTRY = 2


@dataclass(slots=True)
class KeywordSaving:
    keyword: str
    tree_entries: int
    cluster_entries: int

    @property
    def saving_pct(self) -> float:
        if self.tree_entries == 0:
            return 0.0
        return 100.0 * (1.0 - self.cluster_entries / self.tree_entries)


@dataclass(slots=True)
class SavingsStats:
    """Entry counts and modeled byte sizes for both index layouts."""

    per_keyword: list[KeywordSaving]
    tree_total: int
    cluster_total: int
    rcpm_entries: int
    node_count: int

    @property
    def total_saving_pct(self) -> float:
        if self.tree_total == 0:
            return 0.0
        return 100.0 * (1.0 - self.cluster_total / self.tree_total)

    @property
    def tree_bytes_slca(self) -> int:
        return self.tree_total * SLCA_INTS_PER_ENTRY * INT_BYTES

    @property
    def tree_bytes_elca(self) -> int:
        return self.tree_total * ELCA_INTS_PER_ENTRY * INT_BYTES

    @property
    def rcpm_bytes(self) -> int:
        return self.rcpm_entries * RCPM_INTS_PER_ENTRY * INT_BYTES

    @property
    def cluster_bytes_slca(self) -> int:
        return self.cluster_total * SLCA_INTS_PER_ENTRY * INT_BYTES + self.rcpm_bytes

    @property
    def cluster_bytes_elca(self) -> int:
        return self.cluster_total * ELCA_INTS_PER_ENTRY * INT_BYTES + self.rcpm_bytes


def savings_report(tree_index: TreeIndex, cluster: IDCluster) -> SavingsStats:
    """Per-keyword and total entry counts of both indices, with byte sizes.

    Raises ValueError when the indices come from different documents.
    """
    if tree_index.node_count != cluster.node_count:
        raise ValueError("indices were built from different documents")
    cluster_counts: dict[str, int] = {}
    for comp in cluster.components:
        for w, lst in comp.lists.items():
            cluster_counts[w] = cluster_counts.get(w, 0) + len(lst)
    rows = [
        KeywordSaving(w, len(lst), cluster_counts.get(w, 0))
        for w, lst in tree_index.lists.items()
    ]
    rows.sort(key=lambda r: (-r.tree_entries, r.keyword))
    return SavingsStats(
        per_keyword=rows,
        tree_total=sum(r.tree_entries for r in rows),
        cluster_total=sum(r.cluster_entries for r in rows),
        rcpm_entries=len(cluster.rcpm),
        node_count=tree_index.node_count,
    )
