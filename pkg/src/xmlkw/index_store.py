"""Versioned binary persistence for TreeIndex and IDCluster.

Layout (all integers little-endian, fixed width; i32 is signed):

    magic        4 bytes  "IDCX"
    version      u32      currently 1
    kind         u32      1 = tree index, 2 = cluster
    node_count   u32
    keywords     u32 count, then per keyword: u32 byte length + UTF-8 bytes

    kind 1: per keyword, in dictionary order:
        u32 entry count, then ids/pid_pos/n_desc as i32 arrays

    kind 2:
        u32 component count
        per component:
            u32 root id, u32 occurrence count
            u32 member count + members as i32 array
            u32 list count, then per list:
                u32 keyword index (into the dictionary)
                u32 entry count, then ids/pid_pos/n_desc as i32 arrays
        u32 RCPM entry count, then per entry: dummy id, component, offset (i32)

No trailing bytes are allowed. Files are written to a temp file and
renamed into place, so a crash never leaves a partial index behind.
"""

from __future__ import annotations

import os
import struct
import sys
import tempfile
from array import array
from typing import BinaryIO

from .dag_builder import IDCluster, RedundancyComponent
from .tree_index import IDList, TreeIndex

MAGIC = b"IDCX"
VERSION = 1
KIND_TREE = 1
KIND_CLUSTER = 2

_NEEDS_SWAP = sys.byteorder == "big"


class IndexStoreError(Exception):
    """Base class for index file errors."""


class CorruptIndexError(IndexStoreError):
    """The file is not a readable index (bad magic, truncated, garbage)."""


class VersionMismatchError(IndexStoreError):
    """The file uses an unsupported format version."""


def _pack_u32(value: int) -> bytes:
    return struct.pack("<I", value)


class _Writer:
    def __init__(self, fh: BinaryIO):
        self.fh = fh
        self.written = 0

    def write(self, data: bytes) -> None:
        self.fh.write(data)
        self.written += len(data)

    def u32(self, value: int) -> None:
        self.write(struct.pack("<I", value))

    def i32_array(self, arr: array) -> None:
        if _NEEDS_SWAP:
            arr = array("i", arr)
            arr.byteswap()
        self.write(arr.tobytes())

    def string(self, s: str) -> None:
        raw = s.encode("utf-8")
        self.u32(len(raw))
        self.write(raw)

    def idlist(self, lst: IDList) -> None:
        self.u32(len(lst))
        self.i32_array(lst.ids)
        self.i32_array(lst.pid_pos)
        self.i32_array(lst.n_desc)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        end = self.pos + n
        if end > len(self.data):
            raise CorruptIndexError("truncated index file")
        chunk = self.data[self.pos : end]
        self.pos = end
        return chunk

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def i32_array(self, count: int) -> array:
        arr = array("i")
        arr.frombytes(self.take(4 * count))
        if _NEEDS_SWAP:
            arr.byteswap()
        return arr

    def string(self) -> str:
        n = self.u32()
        try:
            return self.take(n).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorruptIndexError("bad keyword encoding") from exc

    def idlist(self) -> IDList:
        n = self.u32()
        ids = self.i32_array(n)
        pid_pos = self.i32_array(n)
        n_desc = self.i32_array(n)
        return IDList(ids, pid_pos, n_desc)

    def expect_eof(self) -> None:
        if self.pos != len(self.data):
            raise CorruptIndexError("trailing bytes after index data")


def save(index: TreeIndex | IDCluster, path: str) -> int:
    """Write the index to `path` atomically; returns the byte count."""
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)))
    try:
        with os.fdopen(fd, "wb") as fh:
            w = _Writer(fh)
            w.write(MAGIC)
            w.u32(VERSION)
            if isinstance(index, TreeIndex):
                w.u32(KIND_TREE)
                w.u32(index.node_count)
                keywords = list(index.lists)
                w.u32(len(keywords))
                for kw in keywords:
                    w.string(kw)
                for kw in keywords:
                    w.idlist(index.lists[kw])
            elif isinstance(index, IDCluster):
                w.u32(KIND_CLUSTER)
                w.u32(index.node_count)
                keywords = sorted({w_ for c in index.components for w_ in c.lists})
                kw_index = {kw: i for i, kw in enumerate(keywords)}
                w.u32(len(keywords))
                for kw in keywords:
                    w.string(kw)
                w.u32(len(index.components))
                for comp in index.components:
                    w.u32(comp.root_id)
                    w.u32(comp.occurrence_count)
                    w.u32(len(comp.members))
                    w.i32_array(array("i", comp.members))
                    w.u32(len(comp.lists))
                    for kw in sorted(comp.lists, key=kw_index.__getitem__):
                        w.u32(kw_index[kw])
                        w.idlist(comp.lists[kw])
                w.u32(len(index.rcpm))
                rcpm_arr = array("i")
                for dummy_id in sorted(index.rcpm):
                    rc, off = index.rcpm[dummy_id]
                    rcpm_arr.extend((dummy_id, rc, off))
                w.i32_array(rcpm_arr)
            else:
                raise TypeError(f"cannot save {type(index).__name__}")
            byte_count = w.written
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return byte_count


def load(path: str) -> TreeIndex | IDCluster:
    """Load an index written by save(); never partially loads a bad file."""
    with open(path, "rb") as fh:
        data = fh.read()
    r = _Reader(data)
    if r.take(4) != MAGIC:
        raise CorruptIndexError("not an index file (bad magic)")
    version = r.u32()
    if version != VERSION:
        raise VersionMismatchError(
            f"unsupported index version {version} (expected {VERSION})"
        )
    kind = r.u32()
    node_count = r.u32()
    n_keywords = r.u32()
    keywords = [r.string() for _ in range(n_keywords)]
    if kind == KIND_TREE:
        lists = {kw: r.idlist() for kw in keywords}
        r.expect_eof()
        return TreeIndex(lists, node_count)
    if kind == KIND_CLUSTER:
        n_comps = r.u32()
        components = []
        for idx in range(n_comps):
            root_id = r.u32()
            occurrence = r.u32()
            n_members = r.u32()
            members = list(r.i32_array(n_members))
            comp = RedundancyComponent(
                index=idx,
                root_id=root_id,
                occurrence_count=occurrence,
                members=members,
            )
            n_lists = r.u32()
            for _ in range(n_lists):
                kw_idx = r.u32()
                if kw_idx >= len(keywords):
                    raise CorruptIndexError("keyword index out of range")
                comp.lists[keywords[kw_idx]] = r.idlist()
            components.append(comp)
        n_rcpm = r.u32()
        triples = r.i32_array(3 * n_rcpm)
        rcpm = {
            triples[3 * i]: (triples[3 * i + 1], triples[3 * i + 2])
            for i in range(n_rcpm)
        }
        r.expect_eof()
        return IDCluster(components, rcpm, node_count)
    raise CorruptIndexError(f"unknown index kind {kind}")
