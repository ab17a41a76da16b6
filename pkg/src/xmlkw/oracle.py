"""Reference implementations of CA, SLCA and ELCA, straight from the
definitions, used as ground truth in tests.

A node is a common ancestor (CA) for a query when its subtree contains
every query keyword. SLCA nodes are CA nodes without CA descendants. A
node is ELCA when it still contains every keyword after the subtrees of
all its CA descendants are removed.

These functions share no code with the production search paths; they
work directly on the DocumentTree.
"""

from __future__ import annotations

from .doc_model import DocumentTree


def _dedupe(keywords: list[str]) -> list[str]:
    seen: dict[str, None] = {}
    for w in keywords:
        seen.setdefault(w, None)
    return list(seen)


def ca_oracle(doc: DocumentTree, keywords: list[str]) -> list[int]:
    """All nodes whose subtree (self included) contains every keyword.

    Computed by accumulating per-subtree keyword presence bottom-up,
    which is the containment definition applied verbatim.
    """
    kws = _dedupe(keywords)
    if not kws:
        raise ValueError("at least one keyword required")
    bit = {w: 1 << i for i, w in enumerate(kws)}
    full = (1 << len(kws)) - 1
    n = doc.node_count
    masks = [0] * (n + 1)
    for i in range(1, n + 1):
        m = 0
        for w in doc.keywords[i]:
            b = bit.get(w)
            if b:
                m |= b
        masks[i] = m
    parents = doc.parents
    for i in range(n, 1, -1):  # children have larger IDs than their parent
        masks[parents[i]] |= masks[i]
    return [i for i in range(1, n + 1) if masks[i] == full]


def _subtree_sizes(doc: DocumentTree) -> list[int]:
    n = doc.node_count
    sizes = [1] * (n + 1)
    parents = doc.parents
    for i in range(n, 1, -1):
        sizes[parents[i]] += sizes[i]
    sizes[0] = 0
    return sizes


def slca_oracle(doc: DocumentTree, keywords: list[str]) -> list[int]:
    """CA nodes that have no CA node below them."""
    ca = ca_oracle(doc, keywords)
    sizes = _subtree_sizes(doc)
    out = []
    for idx, node in enumerate(ca):
        # Pre-order: the subtree of `node` is the ID range [node, node+size).
        nxt = idx + 1
        if nxt < len(ca) and ca[nxt] < node + sizes[node]:
            continue
        out.append(node)
    return out


def elca_oracle(doc: DocumentTree, keywords: list[str]) -> list[int]:
    """CA nodes that still contain every keyword after deleting the
    subtrees of all their CA descendants."""
    kws = _dedupe(keywords)
    ca = ca_oracle(doc, kws)
    ca_set = set(ca)
    want = set(kws)
    out = []
    for node in ca:
        remaining = set()
        stack = [node]
        while stack:
            cur = stack.pop()
            for w in doc.keywords[cur]:
                if w in want:
                    remaining.add(w)
            if len(remaining) == len(want):
                break
            for child in doc.children(cur):
                if child not in ca_set:  # prune CA-descendant subtrees
                    stack.append(child)
        if len(remaining) == len(want):
            out.append(node)
    return out


def containment_oracle(doc: DocumentTree, keyword: str) -> list[int]:
    """All nodes containing `keyword` directly or indirectly (ascending)."""
    n = doc.node_count
    contains = bytearray(n + 1)
    for i in range(1, n + 1):
        if keyword in doc.keywords[i]:
            contains[i] = 1
    parents = doc.parents
    for i in range(n, 1, -1):
        if contains[i]:
            contains[parents[i]] = 1
    return [i for i in range(1, n + 1) if contains[i]]
