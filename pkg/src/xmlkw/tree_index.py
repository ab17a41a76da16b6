"""Baseline inverted index: one IDList per keyword over the whole tree.

An IDList holds, for every node that contains the keyword directly or
indirectly, three values: the node ID, the position of the node's parent
inside the same list (PIDPos, -1 for the document root), and the number
of nodes within the node's subtree that contain the keyword directly
(N_Desc). Lists are sorted by ID and stored as three parallel 32-bit
arrays, matching the two-(three-)integers-per-node cost model used for
SLCA (ELCA) size accounting.
"""

from __future__ import annotations

from array import array

from .doc_model import DocumentTree

_EMPTY = None  # set lazily to a shared empty IDList


class IDList:
    """Inverted list for one keyword: parallel ids/pid_pos/n_desc arrays."""

    __slots__ = ("ids", "pid_pos", "n_desc")

    def __init__(self, ids: array, pid_pos: array, n_desc: array):
        self.ids = ids
        self.pid_pos = pid_pos
        self.n_desc = n_desc

    def __len__(self) -> int:
        return len(self.ids)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IDList):
            return NotImplemented
        return (
            self.ids == other.ids
            and self.pid_pos == other.pid_pos
            and self.n_desc == other.n_desc
        )

    def __repr__(self) -> str:
        return f"<IDList len={len(self.ids)}>"

    def parent_id(self, pos: int) -> int:
        """ID of the parent of the entry at `pos`, or 0 when outside the list."""
        pp = self.pid_pos[pos]
        return self.ids[pp] if pp >= 0 else 0

    def entries(self) -> list[tuple[int, int, int]]:
        return list(zip(self.ids, self.pid_pos, self.n_desc))


def empty_idlist() -> IDList:
    global _EMPTY
    if _EMPTY is None:
        _EMPTY = IDList(array("i"), array("i"), array("i"))
    return _EMPTY


def make_idlist(entries: list[tuple[int, int]], parent_of) -> IDList:
    """Build an IDList from (node_id, n_desc) pairs and a parent lookup.

    Entries are sorted by ID; pid_pos is resolved within the list, -1 when
    the parent is absent (only the root of the indexed scope).
    """
    entries.sort()
    ids = array("i", (e[0] for e in entries))
    n_desc = array("i", (e[1] for e in entries))
    pos_of = {nid: i for i, nid in enumerate(ids)}
    pid_pos = array("i", (pos_of.get(parent_of(nid), -1) for nid in ids))
    return IDList(ids, pid_pos, n_desc)


class TreeIndex:
    """Per-keyword IDLists over the uncompressed document tree."""

    __slots__ = ("lists", "node_count")

    def __init__(self, lists: dict[str, IDList], node_count: int):
        self.lists = lists
        self.node_count = node_count

    def lookup(self, keyword: str) -> IDList:
        """IDList for `keyword`; an empty list when it was never indexed."""
        return self.lists.get(keyword) or empty_idlist()

    def total_entries(self) -> int:
        return sum(len(lst) for lst in self.lists.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TreeIndex):
            return NotImplemented
        return self.node_count == other.node_count and self.lists == other.lists

    def __repr__(self) -> str:
        return f"<TreeIndex keywords={len(self.lists)} entries={self.total_entries()}>"


def build_tree_index(doc: DocumentTree) -> TreeIndex:
    """Build the baseline index in a single pass over the document.

    The node pass collects, per keyword, the ascending list of nodes that
    contain it directly; containment closure, N_Desc accumulation and
    PIDPos resolution then run on the collected lists only.
    """
    directs: dict[str, list[int]] = {}
    n = doc.node_count
    keywords = doc.keywords
    for i in range(1, n + 1):
        for w in keywords[i]:
            lst = directs.get(w)
            if lst is None:
                directs[w] = [i]
            else:
                lst.append(i)

    parents = doc.parents
    lists: dict[str, IDList] = {}
    for w, direct_nodes in directs.items():
        containing = set(direct_nodes)
        for d in direct_nodes:
            p = parents[d]
            # Containment propagates upward; stop at an already-known node,
            # whose ancestors are known too.
            while p and p not in containing:
                containing.add(p)
                p = parents[p]
        ids = array("i", sorted(containing))
        direct_set = set(direct_nodes)
        # Descending IDs visit children before parents, so each count is
        # final when it is folded into the parent.
        acc: dict[int, int] = {}
        m = len(ids)
        n_desc = array("i", bytes(4 * m))
        for j in range(m - 1, -1, -1):
            nid = ids[j]
            nd = acc.get(nid, 0) + (1 if nid in direct_set else 0)
            n_desc[j] = nd
            p = parents[nid]
            if p:
                acc[p] = acc.get(p, 0) + nd
        pos_of = {nid: j for j, nid in enumerate(ids)}
        pid_pos = array("i", (pos_of.get(parents[nid], -1) for nid in ids))
        lists[w] = IDList(ids, pid_pos, n_desc)
    return TreeIndex(lists, n)


def idlist_lookup(index: TreeIndex, keyword: str) -> IDList:
    """Lookup that never fails; unknown keywords yield an empty list."""
    return index.lookup(keyword)
