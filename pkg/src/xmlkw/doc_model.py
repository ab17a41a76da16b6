"""Document model: XML parsed into a labeled ordered tree with pre-order IDs.

Every element and every attribute becomes a node. Attributes appear as the
first children of their element, in attribute document order, so pre-order
IDs are deterministic. Each node carries the set of keywords it directly
contains: the tokens of its name plus the tokens of all of its own text
values. Keyword matching throughout the package is case-sensitive and
exact-string; no normalization, stemming or stop-wording is applied.
"""

from __future__ import annotations

import sys
from array import array
from dataclasses import dataclass
from typing import Iterator
from xml.parsers import expat
from xml.sax.saxutils import escape, quoteattr

# Node IDs must fit a signed 32-bit integer (also the on-disk entry width).
MAX_NODE_ID = 2**31 - 1


class ParseError(ValueError):
    """Raised for malformed XML input. Carries the failing byte offset."""

    def __init__(self, message: str, byte_offset: int = -1):
        super().__init__(message)
        self.byte_offset = byte_offset


class DocumentTooLarge(ValueError):
    """Raised when a document has more nodes than MAX_NODE_ID allows."""


def tokenize(text: str) -> list[str]:
    """Split text into keywords at Unicode whitespace runs.

    Empty tokens are dropped; all non-whitespace characters are kept
    verbatim (punctuation included, so '7"' is a single keyword).
    """
    return text.split()


@dataclass(frozen=True)
class Node:
    """Read-only view of one tree node."""

    id: int
    parent_id: int  # 0 for the root
    label: str
    direct_keywords: frozenset[str]
    is_attribute: bool


class DocumentTree:
    """Labeled ordered tree with pre-order IDs 1..N.

    Immutable once constructed; safe to share across concurrent readers.
    Node data is held in parallel arrays indexed by node ID (slot 0 unused).
    direct_keywords are stored as sorted tuples acting as sets.
    """

    __slots__ = ("labels", "parents", "keywords", "attr_flags", "_children")

    def __init__(
        self,
        labels: list[str | None],
        parents: array,
        keywords: list[tuple[str, ...] | None],
        attr_flags: bytearray,
    ):
        n = len(labels) - 1
        if n < 1:
            raise ValueError("document must have at least a root node")
        if n > MAX_NODE_ID:
            raise DocumentTooLarge(f"{n} nodes exceed the 32-bit ID limit")
        if not (len(parents) == len(keywords) == len(attr_flags) == n + 1):
            raise ValueError("node array lengths disagree")
        if parents[1] != 0:
            raise ValueError("root node must have parent 0")
        for i in range(2, n + 1):
            if not 1 <= parents[i] < i:
                raise ValueError(f"node {i} has invalid parent {parents[i]}")
        self.labels = labels
        self.parents = parents
        self.keywords = keywords
        self.attr_flags = attr_flags
        self._children: list[list[int]] | None = None

    @property
    def node_count(self) -> int:
        return len(self.labels) - 1

    @property
    def root(self) -> int:
        return 1

    def parent(self, node_id: int) -> int:
        return self.parents[node_id]

    def label(self, node_id: int) -> str:
        return self.labels[node_id]

    def direct_keywords(self, node_id: int) -> tuple[str, ...]:
        return self.keywords[node_id]

    def is_attribute(self, node_id: int) -> bool:
        return bool(self.attr_flags[node_id])

    def children(self, node_id: int) -> list[int]:
        """Children in document order (attributes first, then elements)."""
        if self._children is None:
            ch: list[list[int]] = [[] for _ in range(self.node_count + 1)]
            parents = self.parents
            for i in range(2, self.node_count + 1):
                ch[parents[i]].append(i)
            self._children = ch
        return self._children[node_id]

    def node(self, node_id: int) -> Node:
        return Node(
            id=node_id,
            parent_id=self.parents[node_id],
            label=self.labels[node_id],
            direct_keywords=frozenset(self.keywords[node_id]),
            is_attribute=bool(self.attr_flags[node_id]),
        )

    def iter_ids(self) -> Iterator[int]:
        return iter(range(1, self.node_count + 1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DocumentTree):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.parents == other.parents
            and self.keywords == other.keywords
            and self.attr_flags == other.attr_flags
        )

    def __repr__(self) -> str:
        return f"<DocumentTree nodes={self.node_count}>"

    def serialize(self) -> bytes:
        """Render the tree back to UTF-8 XML.

        Text content is emitted as the node's direct keywords (minus the
        label token) joined by single spaces; this preserves labels, order
        and keyword sets exactly, which is all the model stores.
        """
        out: list[str] = []
        # Iterative DFS with (node, phase) frames to survive deep trees.
        stack: list[tuple[int, int]] = [(1, 0)]
        while stack:
            node, phase = stack.pop()
            if phase == 1:
                out.append(f"</{self.labels[node]}>")
                continue
            attrs = []
            elem_children = []
            for c in self.children(node):
                if self.attr_flags[c]:
                    attrs.append(c)
                else:
                    elem_children.append(c)
            open_tag = [f"<{self.labels[node]}"]
            for a in attrs:
                label = self.labels[a]
                toks = [t for t in self.keywords[a] if t != label]
                open_tag.append(f" {label}={quoteattr(' '.join(toks))}")
            label = self.labels[node]
            text = escape(" ".join(t for t in self.keywords[node] if t != label))
            if not elem_children and not text:
                open_tag.append("/>")
                out.append("".join(open_tag))
                continue
            open_tag.append(">")
            open_tag.append(text)
            out.append("".join(open_tag))
            stack.append((node, 1))
            for c in reversed(elem_children):
                stack.append((c, 0))
        return "".join(out).encode("utf-8")


class _TreeBuilder:
    """Accumulates nodes during parsing; finalizes keyword tuples lazily."""

    def __init__(self) -> None:
        self.labels: list[str | None] = [None]
        self.parents = array("i", [0])
        self.keywords: list[tuple[str, ...] | None] = [None]
        self.attr_flags = bytearray(1)
        # Stack of (node_id, pending token list) for open elements.
        self.open: list[tuple[int, list[str]]] = []
        self.next_id = 1

    def _new_node(self, parent: int, label: str, is_attr: bool) -> int:
        nid = self.next_id
        if nid > MAX_NODE_ID:
            raise DocumentTooLarge("node count exceeds the 32-bit ID limit")
        self.next_id += 1
        self.labels.append(sys.intern(label))
        self.parents.append(parent)
        self.keywords.append(None)
        self.attr_flags.append(1 if is_attr else 0)
        return nid

    def start_element(self, name: str, attrs: list[str]) -> None:
        parent = self.open[-1][0] if self.open else 0
        nid = self._new_node(parent, name, False)
        tokens = tokenize(name)
        self.open.append((nid, tokens))
        # expat with ordered_attributes gives [name1, value1, name2, ...].
        for i in range(0, len(attrs), 2):
            aname, avalue = attrs[i], attrs[i + 1]
            anid = self._new_node(nid, aname, True)
            atoks = tokenize(aname) + tokenize(avalue)
            self.keywords[anid] = self._finish(atoks)

    def char_data(self, data: str) -> None:
        if self.open:
            self.open[-1][1].extend(data.split())

    def end_element(self, name: str) -> None:
        nid, tokens = self.open.pop()
        self.keywords[nid] = self._finish(tokens)

    @staticmethod
    def _finish(tokens: list[str]) -> tuple[str, ...]:
        return tuple(sorted(set(map(sys.intern, tokens))))

    def build(self) -> DocumentTree:
        return DocumentTree(self.labels, self.parents, self.keywords, self.attr_flags)


def _make_parser(builder: _TreeBuilder) -> expat.XMLParserType:
    parser = expat.ParserCreate()
    parser.ordered_attributes = True
    parser.buffer_text = True
    parser.StartElementHandler = builder.start_element
    parser.EndElementHandler = builder.end_element
    parser.CharacterDataHandler = builder.char_data
    return parser


def parse_document(data: bytes | str) -> DocumentTree:
    """Parse a UTF-8 XML document given as bytes (or str) into a DocumentTree.

    Raises ParseError (with the failing byte offset) on malformed or empty
    input. Namespace prefixes are treated as literal label text.
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    builder = _TreeBuilder()
    parser = _make_parser(builder)
    try:
        parser.Parse(data, True)
    except expat.ExpatError as exc:
        raise ParseError(str(exc), parser.ErrorByteIndex) from exc
    if builder.next_id == 1:
        raise ParseError("empty document", 0)
    return builder.build()


def parse_path(path: str) -> DocumentTree:
    """Parse XML from a file path, or from standard input when path is '-'."""
    builder = _TreeBuilder()
    parser = _make_parser(builder)
    try:
        if path == "-":
            src = sys.stdin.buffer
            while chunk := src.read(1 << 20):
                parser.Parse(chunk, False)
            parser.Parse(b"", True)
        else:
            with open(path, "rb") as fh:
                while chunk := fh.read(1 << 20):
                    parser.Parse(chunk, False)
                parser.Parse(b"", True)
    except expat.ExpatError as exc:
        raise ParseError(str(exc), parser.ErrorByteIndex) from exc
    if builder.next_id == 1:
        raise ParseError("empty document", 0)
    return builder.build()


def build_tree(structure) -> DocumentTree:
    """Build a DocumentTree from nested (label, text, children) tuples.

    `text` may be a string (tokenized) or an iterable of tokens. Children
    whose label starts with '@' become attribute nodes. Intended for tests
    and generators; pre-order IDs are assigned by traversal order.
    """
    builder = _TreeBuilder()

    def norm_tokens(label: str, text) -> list[str]:
        toks = tokenize(text) if isinstance(text, str) else list(text)
        return tokenize(label.lstrip("@")) + toks

    stack = [(structure, 0)]
    # Iterative pre-order so deep test trees do not hit the recursion limit.
    while stack:
        (label, text, children), parent = stack.pop()
        is_attr = label.startswith("@")
        nid = builder._new_node(parent, label.lstrip("@"), is_attr)
        builder.keywords[nid] = builder._finish(norm_tokens(label, text))
        for child in reversed(children):
            stack.append((child, nid))
    return builder.build()
