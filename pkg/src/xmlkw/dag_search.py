"""Query execution over the DAG-compressed index.

Each redundancy component is searched at most once per query with an
unmodified baseline algorithm. A result that keys into the RCPM is a
dummy node: the nested component is searched (or its cached result
reused), the dummy is replaced by the nested component's first result
plus the edge offset, and the remaining nested results are appended with
the same offset. Nesting is walked with an explicit work stack, so
pathological nesting depth cannot overflow the call stack.

Special cases around a component's own root, whose ID doubles as the
RCPM key of its kept occurrence: an SLCA list holding only the component
root is returned without expansion (the lookup would recurse into the
component itself), and a leading root in an ELCA list is kept as a
result but skipped for expansion.
"""

from __future__ import annotations

from .base_search import (
    _bwd_elca_lists,
    _bwd_slca_lists,
    _dedupe,
    _fwd_elca_lists,
    _fwd_slca_lists,
    count_ca_lists,
)
from .dag_builder import IDCluster, RedundancyComponent
from .tree_index import IDList


def _component_lists(comp: RedundancyComponent, kws: list[str]) -> list[IDList] | None:
    lists = []
    for w in kws:
        lst = comp.lists.get(w)
        if lst is None or len(lst) == 0:
            return None
        lists.append(lst)
    lists.sort(key=len)
    return lists


def _dag_search(
    cluster: IDCluster,
    keywords: list[str],
    inner,
    elca: bool,
    visits: dict[int, int] | None,
) -> list[int]:
    kws = _dedupe(keywords)
    comps = cluster.components
    rcpm = cluster.rcpm
    results: dict[int, list[int]] = {}
    done: set[int] = set()
    # Work-stack frames: [component, phase, local results, expansions].
    # A component may be scheduled by several referencing frames; only the
    # first frame to pop actually searches it (nesting is acyclic, so no
    # frame can run while an earlier frame for the same component is
    # mid-expansion), the rest skip via the done set.
    stack: list[list] = [[0, 0, None, None]]
    while stack:
        frame = stack[-1]
        rc = frame[0]
        if rc in done and frame[1] == 0:
            stack.pop()
            continue
        if frame[1] == 0:
            comp = comps[rc]
            lists = _component_lists(comp, kws)
            if visits is not None:
                visits[rc] = visits.get(rc, 0) + 1
            local = inner(lists) if lists is not None else []
            root_id = comp.root_id
            if not elca and local and local[0] == root_id:
                # Root-only SLCA: the RCPM lookup would hit the component's
                # own kept-occurrence key and loop forever. The component
                # still counts as searched; callers reuse [root] as cached.
                assert len(local) == 1
                results[rc] = local
                done.add(rc)
                stack.pop()
                continue
            start = 0
            if elca and local and local[0] == root_id:
                start = 1  # root stays a result but is not expanded
            expansions = []
            for i in range(start, len(local)):
                ref = rcpm.get(local[i])
                if ref is not None:
                    expansions.append((i, ref[0], ref[1]))
            frame[1] = 1
            frame[2] = local
            frame[3] = expansions
            for _, rc_nes, _ in expansions:
                if rc_nes not in done:
                    stack.append([rc_nes, 0, None, None])
        else:
            local = frame[2]
            extra: list[int] = []
            for i, rc_nes, off in frame[3]:
                nested = results[rc_nes]
                local[i] = nested[0] + off
                for j in range(1, len(nested)):
                    extra.append(nested[j] + off)
            local.extend(extra)
            local.sort()
            results[rc] = local
            done.add(rc)
            stack.pop()
    out = results[0]
    final = sorted(set(out))
    assert len(final) == len(out), "duplicate results after RCPM expansion"
    return final


def dag_fwd_slca(
    cluster: IDCluster, keywords: list[str], visits: dict[int, int] | None = None
) -> list[int]:
    """SLCA over the compressed index with the forward baseline inside."""
    return _dag_search(cluster, keywords, _fwd_slca_lists, False, visits)


def dag_bwd_slca(
    cluster: IDCluster, keywords: list[str], visits: dict[int, int] | None = None
) -> list[int]:
    """SLCA over the compressed index with the backward baseline inside."""
    return _dag_search(
        cluster, keywords, lambda lists: _bwd_slca_lists(lists, plus=False), False, visits
    )


def dag_bwd_slca_plus(
    cluster: IDCluster, keywords: list[str], visits: dict[int, int] | None = None
) -> list[int]:
    """SLCA over the compressed index with the narrowed backward baseline."""
    return _dag_search(
        cluster, keywords, lambda lists: _bwd_slca_lists(lists, plus=True), False, visits
    )


def dag_fwd_elca(
    cluster: IDCluster, keywords: list[str], visits: dict[int, int] | None = None
) -> list[int]:
    """ELCA over the compressed index with the forward baseline inside."""
    return _dag_search(cluster, keywords, _fwd_elca_lists, True, visits)


def dag_bwd_elca(
    cluster: IDCluster, keywords: list[str], visits: dict[int, int] | None = None
) -> list[int]:
    """ELCA over the compressed index with the backward baseline inside."""
    return _dag_search(cluster, keywords, _bwd_elca_lists, True, visits)


def searchable_component_stats(
    cluster: IDCluster, keywords: list[str], elca: bool = False
) -> tuple[int, int, int]:
    """(components, CA entries, local results) over the components whose
    lists cover every query keyword, each counted once.

    This is the static compression view used for savings reporting: the
    CA/result mass left in the index after DAG compression, independent
    of which components a particular query run happens to reach.
    """
    kws = _dedupe(keywords)
    inner = _fwd_elca_lists if elca else _fwd_slca_lists
    n_comps = 0
    ca_total = 0
    local_total = 0
    for comp in cluster.components:
        lists = _component_lists(comp, kws)
        if lists is None:
            continue
        n_comps += 1
        ca_total += count_ca_lists(lists)
        local_total += len(inner(lists))
    return n_comps, ca_total, local_total
