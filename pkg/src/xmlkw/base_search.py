"""Set-intersection SLCA/ELCA search over IDLists.

The CA stream is computed by intersecting the query keywords' IDLists
with one cursor per list: pick the highest current ID and binary search
for it in the remaining lists (forward), or mirror the scheme from the
list ends (backward). SLCA and ELCA checks run on the stream:

* SLCA forward: a CA is kept when the next CA is not its child.
* SLCA backward: ancestors of found CA nodes are skipped via the PIDPos
  chain (they can never be SLCA).
* The "+" backward variant narrows every binary search window using the
  previous CA's parent position (PIDPos) in each list.
* ELCA: a stack holds, per CA on the current root path, its per-keyword
  N_Desc values and the accumulated N_Desc of its CA children; on pop,
  positive differences for all keywords qualify the node as ELCA.

All functions return ascending, duplicate-free result lists and treat an
unknown keyword as an empty intersection.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right

from .tree_index import IDList, TreeIndex


def _dedupe(keywords: list[str]) -> list[str]:
    seen: dict[str, None] = {}
    for w in keywords:
        seen.setdefault(w, None)
    kws = list(seen)
    if not kws:
        raise ValueError("at least one keyword required")
    return kws


def _resolve(index: TreeIndex, keywords: list[str]) -> list[IDList] | None:
    """Deduped lookup, shortest list first; None when any list is empty."""
    lists = [index.lookup(w) for w in _dedupe(keywords)]
    if any(len(lst) == 0 for lst in lists):
        return None
    lists.sort(key=len)
    return lists


def sort_lists(lists: list[IDList]) -> list[IDList] | None:
    """Order resolved lists shortest-first; None when any is empty."""
    if not lists or any(len(lst) == 0 for lst in lists):
        return None
    return sorted(lists, key=len)


class CursorSet:
    """One cursor per keyword IDList, driving the ascending CA stream."""

    __slots__ = ("lists", "positions", "_at_match")

    def __init__(self, lists: list[IDList]):
        self.lists = lists
        self.positions = [0] * len(lists)
        self._at_match = False

    @classmethod
    def for_query(cls, index: TreeIndex, keywords: list[str]) -> "CursorSet":
        lists = _resolve(index, keywords)
        return cls(lists if lists is not None else [])

    def exhausted(self) -> bool:
        if not self.lists:
            return True
        return any(
            p >= len(lst) for p, lst in zip(self.positions, self.lists)
        )


def fwd_get_ca(cursors: CursorSet) -> int | None:
    """Next CA at or after the cursors, in ascending ID order.

    Advances the cursors onto the returned node; successive calls walk
    the whole CA stream and return None once any list is exhausted.
    """
    lists = cursors.lists
    if not lists:
        return None
    pos = cursors.positions
    k = len(lists)
    if cursors._at_match:
        for i in range(k):
            pos[i] += 1
        cursors._at_match = False
    m = -1
    for i in range(k):
        if pos[i] >= len(lists[i].ids):
            return None
        v = lists[i].ids[pos[i]]
        if v > m:
            m = v
    while True:
        for i in range(k):
            ids = lists[i].ids
            p = bisect_left(ids, m, pos[i])
            if p >= len(ids):
                return None
            pos[i] = p
            v = ids[p]
            if v != m:
                m = v  # larger candidate; rescan the other lists
                break
        else:
            cursors._at_match = True
            return m


def fwd_slca(index: TreeIndex, keywords: list[str]) -> list[int]:
    """SLCA by forward CA streaming (the baseline algorithm)."""
    lists = _resolve(index, keywords)
    if lists is None:
        return []
    return _fwd_slca_lists(lists)


def _fwd_slca_lists(lists: list[IDList]) -> list[int]:
    # CA sets are ancestor-closed (containment propagates upward), so a CA
    # u has a CA descendant iff the next CA in ascending order is a child
    # of u: the next CA v inside u's subtree has parent(v) in [u, v), and
    # any CA strictly between u and v would have come first, hence
    # parent(v) == u. The next-CA parent test alone is therefore exact.
    k = len(lists)
    arrs = [lst.ids for lst in lists]
    ids0 = arrs[0]
    pid0 = lists[0].pid_pos
    n0 = len(ids0)
    pos = [0] * k
    out: list[int] = []
    u = 0
    m = max(a[0] for a in arrs)
    while True:
        ca = -1
        while True:
            for i in range(k):
                ids = arrs[i]
                p = bisect_left(ids, m, pos[i])
                if p >= len(ids):
                    ca = 0
                    break
                pos[i] = p
                v = ids[p]
                if v != m:
                    m = v
                    break
            else:
                ca = m
            if ca != -1:
                break
        if ca == 0:  # some list exhausted
            break
        pp = pid0[pos[0]]
        parent = ids0[pp] if pp >= 0 else 0
        if u and parent != u:
            out.append(u)
        u = ca
        for i in range(k):
            pos[i] += 1
        if pos[0] >= n0:
            break
        m = ca + 1
    if u:
        out.append(u)
    return out


def fwd_elca(index: TreeIndex, keywords: list[str]) -> list[int]:
    """ELCA by forward CA streaming plus the two-array stack check."""
    lists = _resolve(index, keywords)
    if lists is None:
        return []
    return _fwd_elca_lists(lists)


def _fwd_elca_lists(lists: list[IDList]) -> list[int]:
    k = len(lists)
    arrs = [lst.ids for lst in lists]
    descs = [lst.n_desc for lst in lists]
    ids0 = arrs[0]
    pid0 = lists[0].pid_pos
    n0 = len(ids0)
    pos = [0] * k
    out: list[int] = []
    # Stack frames: [node_id, own_counts, child_ca_counts]. The frame below
    # a node is always its parent, because pushes happen only after popping
    # down to the incoming CA's parent (CA sets are ancestor-closed).
    stack: list[list] = []

    def pop_frame() -> None:
        node, own, child = stack.pop()
        for i in range(k):
            if own[i] - child[i] <= 0:
                break
        else:
            out.append(node)
        if stack:
            pchild = stack[-1][2]
            for i in range(k):
                pchild[i] += own[i]

    m = max(a[0] for a in arrs)
    while True:
        ca = -1
        while True:
            for i in range(k):
                ids = arrs[i]
                p = bisect_left(ids, m, pos[i])
                if p >= len(ids):
                    ca = 0
                    break
                pos[i] = p
                v = ids[p]
                if v != m:
                    m = v
                    break
            else:
                ca = m
            if ca != -1:
                break
        if ca == 0:
            break
        pp = pid0[pos[0]]
        parent = ids0[pp] if pp >= 0 else 0
        own = [descs[i][pos[i]] for i in range(k)]
        while stack and stack[-1][0] != parent:
            pop_frame()
        stack.append([ca, own, [0] * k])
        for i in range(k):
            pos[i] += 1
        if pos[0] >= n0:
            break
        m = ca + 1
    while stack:
        pop_frame()
    out.sort()
    return out


def _bwd_ca_setup(lists: list[IDList]):
    arrs = [lst.ids for lst in lists]
    pids = [lst.pid_pos for lst in lists]
    pos = [len(a) - 1 for a in arrs]
    return arrs, pids, pos


def _bwd_next_ca(arrs, pids, pos, last, plus: bool):
    """Next CA in descending order, or None.

    `last` is (positions, parent_positions, parent_id) of the previous CA;
    with `plus` the binary search windows are narrowed to (PIDPos, pos) or
    (0, PIDPos] around the previous CA's parent, which is sound because
    list order is ID order and the parent's position is known exactly.
    """
    k = len(arrs)
    m = None
    for i in range(k):
        if pos[i] < 0:
            return None
        v = arrs[i][pos[i]]
        if m is None or v < m:
            m = v
    last_pos, last_ppos, last_pid = last
    while True:
        for i in range(k):
            ids = arrs[i]
            lo, hi = 0, pos[i] + 1
            if plus and last_pos is not None:
                if last_ppos[i] < 0:
                    pass  # previous CA was the scope root; no shrink
                elif m >= last_pid:
                    lo = last_ppos[i]
                    hi = min(hi, last_pos[i])
                else:
                    hi = min(hi, last_ppos[i])
            p = bisect_right(ids, m, lo, hi) - 1
            if p < lo:
                return None
            pos[i] = p
            v = ids[p]
            if v != m:
                m = v  # smaller candidate; rescan
                break
        else:
            return m


def bwd_slca(index: TreeIndex, keywords: list[str]) -> list[int]:
    """SLCA by backward CA streaming with ancestor skipping."""
    lists = _resolve(index, keywords)
    if lists is None:
        return []
    return _bwd_slca_lists(lists, plus=False)


def bwd_slca_plus(index: TreeIndex, keywords: list[str]) -> list[int]:
    """bwd_slca with PIDPos-narrowed binary search windows."""
    lists = _resolve(index, keywords)
    if lists is None:
        return []
    return _bwd_slca_lists(lists, plus=True)


def _bwd_slca_lists(lists: list[IDList], plus: bool) -> list[int]:
    k = len(lists)
    arrs, pids, pos = _bwd_ca_setup(lists)
    ids0 = arrs[0]
    pid0 = pids[0]
    # Driver-list positions of nodes known to be ancestors of some CA;
    # those are CA but never SLCA. The set is ancestor-closed: marking
    # walks the PIDPos chain and stops only at already-marked positions.
    marked = bytearray(len(ids0))
    out: list[int] = []
    last = (None, None, 0)
    while True:
        ca = _bwd_next_ca(arrs, pids, pos, last, plus)
        if ca is None:
            break
        p0 = pos[0]
        if not marked[p0]:
            out.append(ca)
        q = pid0[p0]
        while q >= 0 and not marked[q]:
            marked[q] = 1
            q = pid0[q]
        if plus:
            last_pos = pos.copy()
            last_ppos = [pids[i][pos[i]] for i in range(k)]
            pp = pid0[p0]
            last = (last_pos, last_ppos, ids0[pp] if pp >= 0 else 0)
        for i in range(k):
            pos[i] -= 1
    out.reverse()
    return out


def bwd_elca(index: TreeIndex, keywords: list[str]) -> list[int]:
    """ELCA by backward CA streaming with narrowed binary searches.

    Ancestor skipping is not applicable: inner nodes can be ELCA.
    """
    lists = _resolve(index, keywords)
    if lists is None:
        return []
    return _bwd_elca_lists(lists)


def _bwd_elca_lists(lists: list[IDList]) -> list[int]:
    k = len(lists)
    arrs, pids, pos = _bwd_ca_setup(lists)
    ids0 = arrs[0]
    pid0 = pids[0]
    descs = [lst.n_desc for lst in lists]
    out: list[int] = []
    # Mirrored stack: CAs arrive in descending order, so a node's CA
    # children arrive before it and sit contiguously on top of the stack
    # when it arrives. Frames: [node_id, parent_id, own, child_ca].
    stack: list[list] = []

    def qualify(frame: list) -> None:
        _, _, own, child = frame
        for i in range(k):
            if own[i] - child[i] <= 0:
                return
        out.append(frame[0])

    last = (None, None, 0)
    while True:
        ca = _bwd_next_ca(arrs, pids, pos, last, True)
        if ca is None:
            break
        p0 = pos[0]
        pp = pid0[p0]
        parent = ids0[pp] if pp >= 0 else 0
        own = [descs[i][pos[i]] for i in range(k)]
        frame = [ca, parent, own, [0] * k]
        while stack and stack[-1][1] == ca:
            top = stack.pop()
            qualify(top)
            fchild = frame[3]
            town = top[2]
            for i in range(k):
                fchild[i] += town[i]
        stack.append(frame)
        last = (pos.copy(), [pids[i][pos[i]] for i in range(k)], parent)
        for i in range(k):
            pos[i] -= 1
    # After the scope root arrives everything else has folded into it, so
    # at most one frame remains; drain defensively all the same.
    while stack:
        top = stack.pop()
        qualify(top)
        if stack and stack[-1][0] == top[1]:
            fchild = stack[-1][3]
            town = top[2]
            for i in range(k):
                fchild[i] += town[i]
    out.sort()
    return out


def count_ca(index: TreeIndex, keywords: list[str]) -> int:
    """Number of CA nodes for the query (size of the ID intersection)."""
    lists = _resolve(index, keywords)
    if lists is None:
        return 0
    return count_ca_lists(lists)


def count_ca_lists(lists: list[IDList]) -> int:
    cs = CursorSet(lists)
    n = 0
    while fwd_get_ca(cs) is not None:
        n += 1
    return n
