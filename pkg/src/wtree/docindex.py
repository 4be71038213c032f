"""Document retrieval over a string collection.

The documents are concatenated with a 0x00 sentinel after each one; a
suffix array over the concatenation locates every pattern occurrence, and a
wavelet tree over the document array (document id per suffix-array slot)
turns occurrence intervals into document listings, frequencies, and
multi-pattern intersections, optionally restricted to a document-id range.

Documents may not contain the sentinel byte; queries are raw byte strings.
All structures are immutable after construction.
"""

from __future__ import annotations

import struct
from typing import BinaryIO, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .bitvec import SparseBitVec
from .rangeops import rint
from .wavelet import WaveletTree

SENTINEL = 0


class SentinelByteError(ValueError):
    """A document contains the reserved 0x00 sentinel byte."""


def build_suffix_array(text: bytes) -> np.ndarray:
    """Suffix array of ``text`` (1-based positions) by prefix doubling."""
    n = len(text)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rank = np.frombuffer(text, dtype=np.uint8).astype(np.int64)
    k = 1
    order = np.argsort(rank, kind="stable")
    while k < n:
        key2 = np.zeros(n, dtype=np.int64)
        key2[: n - k] = rank[k:] + 1
        order = np.lexsort((key2, rank))
        r1, r2 = rank[order], key2[order]
        bump = np.empty(n, dtype=np.int64)
        bump[0] = 0
        bump[1:] = ((r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])).cumsum()
        rank = np.empty(n, dtype=np.int64)
        rank[order] = bump
        if bump[-1] == n - 1:
            break
        k *= 2
    return order + 1


class DocIndex:
    """Suffix array plus document-array wavelet tree over a collection."""

    def __init__(self, docs: Sequence[bytes]):
        if not docs:
            raise ValueError("collection must hold at least one document")
        for d, doc in enumerate(docs, start=1):
            if SENTINEL in doc:
                raise SentinelByteError(
                    f"document {d} contains the sentinel byte 0x00"
                )
        self.m = len(docs)
        self.concat = b"".join(doc + b"\x00" for doc in docs)
        self.n = len(self.concat)
        lengths = np.array([len(doc) + 1 for doc in docs], dtype=np.int64)
        starts = np.concatenate([[1], np.cumsum(lengths)[:-1] + 1])
        self.doc_bounds = SparseBitVec(starts, self.n)
        self.sa = build_suffix_array(self.concat)
        doc_of = np.searchsorted(starts, self.sa, side="right")
        self.da = WaveletTree(doc_of, sigma=self.m)

    # --- collection accessors ----------------------------------------------

    def documents(self) -> List[bytes]:
        if self.concat is None:
            raise ValueError("index was loaded without text")
        return self.concat.split(b"\x00")[:-1]

    def doc_of_position(self, i: int) -> int:
        """Document owning concatenation position i."""
        if not 1 <= i <= self.n:
            raise ValueError(f"position {i} out of range [1, {self.n}]")
        return self.doc_bounds.rank1(i)

    # --- queries --------------------------------------------------------------

    def pattern_search(self, q: bytes) -> Optional[Tuple[int, int]]:
        """Maximal suffix-array interval whose suffixes start with q."""
        if not q:
            raise ValueError("pattern must be non-empty")
        if SENTINEL in q:
            raise SentinelByteError("pattern contains the sentinel byte 0x00")
        if self.concat is None:
            raise ValueError("index was loaded without text; pattern search unavailable")
        text, sa, qlen = self.concat, self.sa, len(q)
        lo, hi = 0, self.n
        while lo < hi:
            mid = (lo + hi) >> 1
            p = sa[mid] - 1
            if text[p : p + qlen] < q:
                lo = mid + 1
            else:
                hi = mid
        first = lo
        hi = self.n
        while lo < hi:
            mid = (lo + hi) >> 1
            p = sa[mid] - 1
            if text[p : p + qlen] <= q:
                lo = mid + 1
            else:
                hi = mid
        if first == lo:
            return None
        return first + 1, lo

    def _doc_range(
        self, dmin: Optional[int], dmax: Optional[int]
    ) -> Tuple[int, int]:
        lo = 1 if dmin is None else dmin
        hi = self.m if dmax is None else dmax
        if lo < 1 or hi > self.m:
            raise ValueError(f"document range [{lo}, {hi}] out of [1, {self.m}]")
        return lo, hi

    def dlist(
        self,
        q: bytes,
        dmin: Optional[int] = None,
        dmax: Optional[int] = None,
    ) -> Iterator[Tuple[int, int]]:
        """Documents containing q, ascending, each with its tf there."""
        lo, hi = self._doc_range(dmin, dmax)
        interval = self.pattern_search(q)
        if interval is None:
            return
        sp, ep = interval
        yield from self.da.report(sp, ep, lo, hi)

    def dfreq(self, q: bytes, d: int) -> int:
        """Occurrences of q inside document d (0 allowed)."""
        if not 1 <= d <= self.m:
            raise ValueError(f"document {d} out of range [1, {self.m}]")
        interval = self.pattern_search(q)
        if interval is None:
            return 0
        sp, ep = interval
        return self.da.rank(d, ep) - self.da.rank(d, sp - 1)

    def dint(
        self,
        queries: Sequence[bytes],
        t: Optional[int] = None,
        dmin: Optional[int] = None,
        dmax: Optional[int] = None,
    ) -> Iterator[Tuple[int, Tuple[int, ...]]]:
        """Documents containing at least t of the patterns, ascending, with
        per-pattern frequencies (a pattern absent everywhere contributes an
        empty range, which still counts against the threshold)."""
        if not queries:
            raise ValueError("dint needs at least one pattern")
        lo, hi = self._doc_range(dmin, dmax)
        ranges = []
        for q in queries:
            interval = self.pattern_search(q)
            ranges.append(interval if interval is not None else (1, 0))
        yield from rint(self.da, ranges, t=t, rng=(lo, hi))

    # --- space accounting -------------------------------------------------------

    @property
    def bit_report(self) -> dict:
        return {
            "text_bits": 8 * self.n if self.concat is not None else 0,
            "suffix_array_bits": 64 * self.n,
            "doc_array_bits": self.da.bitmap_bits + self.da.aux_bits,
            "doc_bounds_bits": self.doc_bounds.bits_used,
        }

    # --- serialization ------------------------------------------------------------

    def write(self, out: BinaryIO, store_text: bool = True) -> None:
        out.write(struct.pack("<QQQ", self.m, self.n, 1 if store_text else 0))
        self.doc_bounds.write(out)
        if store_text:
            out.write(self.concat)
        out.write(self.sa.astype("<u8").tobytes())
        self.da.write(out)

    @classmethod
    def read(cls, inp: BinaryIO) -> "DocIndex":
        m, n, flags = struct.unpack("<QQQ", inp.read(24))
        idx = cls.__new__(cls)
        idx.m, idx.n = m, n
        idx.doc_bounds = SparseBitVec.read(inp)
        idx.concat = inp.read(n) if flags & 1 else None
        idx.sa = np.frombuffer(inp.read(8 * n), dtype="<u8").astype(np.int64)
        idx.da = WaveletTree.read(inp)
        return idx

    def __repr__(self) -> str:
        return f"DocIndex(m={self.m}, n={self.n})"
