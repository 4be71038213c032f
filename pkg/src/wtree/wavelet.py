"""Balanced wavelet tree over an integer sequence.

The tree replaces the sequence S[1,n] over alphabet [1,sigma]: it answers
access/rank/select plus positional-range queries (count, report) in
O(log u) bit-vector operations, where u is the number of distinct symbols.

Layout: one concatenated bitmap per depth, nodes addressed arithmetically
(no per-node records). Every level stores exactly n bits; positions whose
leaf sits above the deepest level carry zero bits downward so that node
intervals stay aligned across levels. Total stored bits are therefore
n * ceil(log2(u_leaves)).

When the present symbols are much sparser than the declared alphabet, they
are remapped to compact codes [1,u] through a SparseBitVec; otherwise codes
are the symbols themselves. The remap is chosen whenever it lowers the tree
height, which keeps the stored-bits bound at n * ceil(log2 u) in all cases.

Trees are immutable after construction; queries are safe for concurrent
readers (the per-tree visit counters in ``stats`` are advisory only).
"""

from __future__ import annotations

import struct
from typing import BinaryIO, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .bitvec import BitVec, SparseBitVec

_MAGIC = b"WVT1"


def ceil_log2(x: int) -> int:
    """Smallest h with 2**h >= x, for x >= 1."""
    return (x - 1).bit_length()


class Node(NamedTuple):
    """Cursor to a wavelet tree node.

    ``lo..hi`` is the node's (1-based) interval inside its level bitmap,
    ``a..b`` its 0-based code range. A node is a leaf iff a == b.
    """

    depth: int
    lo: int
    hi: int
    a: int
    b: int


class QueryStats:
    """Node-visit counters; purely observational."""

    __slots__ = ("node_visits",)

    def __init__(self) -> None:
        self.node_visits = 0

    def reset(self) -> None:
        self.node_visits = 0


class WaveletTree:
    """Balanced wavelet tree with levelwise concatenated bitmaps."""

    def __init__(self, seq: Sequence[int], sigma: int):
        arr = np.asarray(seq, dtype=np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("sequence must be non-empty and one-dimensional")
        if sigma < 1:
            raise ValueError("alphabet size must be at least 1")
        if int(arr.min()) < 1 or int(arr.max()) > sigma:
            raise ValueError(f"symbols must lie in [1, {sigma}]")
        self.n = int(arr.size)
        self.sigma = int(sigma)
        uniq = np.unique(arr)
        self.distinct = int(uniq.size)
        self.height = ceil_log2(self.distinct)
        if self.height == ceil_log2(self.sigma):
            # Dense: same height either way, skip the remap entirely.
            self.alpha_map: Optional[SparseBitVec] = None
            self.leafspan = self.sigma
            codes = arr - 1
        else:
            self.alpha_map = SparseBitVec(uniq, self.sigma)
            self.leafspan = self.distinct
            codes = np.searchsorted(uniq, arr)
        self.levels: List[BitVec] = []
        self._build(codes)
        self.stats = QueryStats()

    def _build(self, codes: np.ndarray) -> None:
        # One counting pass per level: compute bits, then stable-partition
        # positions by child slot. Leaf slots keep emitting zero (dummy)
        # bits so intervals stay positionally aligned at deeper levels.
        cur = codes
        nid = np.zeros(self.n, dtype=np.int64)
        a = np.zeros(1, dtype=np.int64)
        b = np.full(1, self.leafspan - 1, dtype=np.int64)
        for _ in range(self.height):
            mids = a + (b - a) // 2
            bit = cur > mids[nid]
            self.levels.append(BitVec(bit))
            child = 2 * nid + bit
            order = np.argsort(child, kind="stable")
            cur = cur[order]
            nid = child[order]
            a2 = np.empty(2 * a.size, dtype=np.int64)
            b2 = np.empty(2 * a.size, dtype=np.int64)
            a2[0::2], b2[0::2] = a, mids
            a2[1::2], b2[1::2] = mids + 1, b
            a, b = a2, b2

    # --- alphabet mapping ---------------------------------------------------

    def _check_symbol(self, c: int) -> None:
        if not 1 <= c <= self.sigma:
            raise ValueError(f"symbol {c} out of alphabet [1, {self.sigma}]")

    def code_of(self, c: int) -> Optional[int]:
        """0-based code of symbol c, or None when c never occurs (mapped case)."""
        self._check_symbol(c)
        if self.alpha_map is None:
            return c - 1
        r = self.alpha_map.rank1(c)
        if r >= 1 and self.alpha_map.select1(r) == c:
            return r - 1
        return None

    def code_floor(self, c: int) -> int:
        """Smallest 0-based code whose symbol is >= c (may equal leafspan)."""
        if self.alpha_map is None:
            return max(0, c - 1)
        return self.alpha_map.rank1(min(max(c - 1, 0), self.sigma))

    def code_range(self, ys: int, ye: int) -> Tuple[int, int]:
        """Map a symbol range to a 0-based code range (possibly empty)."""
        if ys > ye:
            return 1, 0
        ys = max(ys, 1)
        ye = min(ye, self.sigma)
        if ys > ye:
            return 1, 0
        if self.alpha_map is None:
            return ys - 1, ye - 1
        return self.alpha_map.rank1(ys - 1), self.alpha_map.rank1(ye) - 1

    def symbol_of(self, code: int) -> int:
        """Original (1-based) symbol for a 0-based code."""
        if self.alpha_map is None:
            return code + 1
        sym = self.alpha_map.select1(code + 1)
        assert sym is not None
        return sym

    # --- node navigation ----------------------------------------------------

    def root(self) -> Node:
        return Node(0, 1, self.n, 0, self.leafspan - 1)

    @staticmethod
    def is_leaf(node: Node) -> bool:
        return node.a == node.b

    def children(self, node: Node) -> Tuple[Node, Node]:
        lv = self.levels[node.depth]
        ones_lo = lv.rank1(node.lo - 1)
        k = (node.hi - lv.rank1(node.hi)) - (node.lo - 1 - ones_lo)
        mid = node.a + (node.b - node.a) // 2
        left = Node(node.depth + 1, node.lo, node.lo + k - 1, node.a, mid)
        right = Node(node.depth + 1, node.lo + k, node.hi, mid + 1, node.b)
        return left, right

    def split(
        self, node: Node, qi: int, qj: int
    ) -> Tuple[Node, int, int, Node, int, int]:
        """Children of ``node`` plus the query interval mapped into each.

        ``qi..qj`` must satisfy lo <= qi <= qj+1 and qj <= hi; empty query
        intervals map to empty intervals.
        """
        lv = self.levels[node.depth]
        r1 = lv.rank1
        lo = node.lo
        ones_lo = r1(lo - 1)
        zeros_lo = lo - 1 - ones_lo
        k = (node.hi - r1(node.hi)) - zeros_lo
        z_qi = (qi - 1 - r1(qi - 1)) - zeros_lo  # zeros before qi inside node
        z_qj = (qj - r1(qj)) - zeros_lo  # zeros up to qj inside node
        mid = node.a + (node.b - node.a) // 2
        left = Node(node.depth + 1, lo, lo + k - 1, node.a, mid)
        right = Node(node.depth + 1, lo + k, node.hi, mid + 1, node.b)
        lqi = lo + z_qi
        lqj = lo + z_qj - 1
        rqi = lo + k + (qi - 1 - lo + 1 - z_qi)
        rqj = lo + k + (qj - lo + 1 - z_qj) - 1
        return left, lqi, lqj, right, rqi, rqj

    # --- basic queries --------------------------------------------------------

    def access(self, i: int) -> int:
        """The original symbol at position i (1-based)."""
        if not 1 <= i <= self.n:
            raise ValueError(f"position {i} out of range [1, {self.n}]")
        visits = self.stats
        node = self.root()
        while node.a != node.b:
            visits.node_visits += 1
            lv = self.levels[node.depth]
            ones_lo = lv.rank1(node.lo - 1)
            r1_i = lv.rank1(i)
            k = (node.hi - lv.rank1(node.hi)) - (node.lo - 1 - ones_lo)
            mid = node.a + (node.b - node.a) // 2
            if lv.access(i):
                i = node.lo + k + (r1_i - ones_lo) - 1
                node = Node(node.depth + 1, node.lo + k, node.hi, mid + 1, node.b)
            else:
                zeros = (i - r1_i) - (node.lo - 1 - ones_lo)
                i = node.lo + zeros - 1
                node = Node(node.depth + 1, node.lo, node.lo + k - 1, node.a, mid)
        visits.node_visits += 1
        return self.symbol_of(node.a)

    def rank(self, c: int, i: int) -> int:
        """Occurrences of symbol c in S[1..i]; 0 when c never occurs."""
        if not 0 <= i <= self.n:
            raise ValueError(f"rank index {i} out of range [0, {self.n}]")
        code = self.code_of(c)
        if code is None:
            return 0
        visits = self.stats
        node = self.root()
        t = i
        while node.a != node.b:
            visits.node_visits += 1
            lv = self.levels[node.depth]
            ones_lo = lv.rank1(node.lo - 1)
            r1_t = lv.rank1(node.lo - 1 + t)
            zeros_t = t - (r1_t - ones_lo)
            k = (node.hi - lv.rank1(node.hi)) - (node.lo - 1 - ones_lo)
            mid = node.a + (node.b - node.a) // 2
            if code <= mid:
                t = zeros_t
                node = Node(node.depth + 1, node.lo, node.lo + k - 1, node.a, mid)
            else:
                t = t - zeros_t
                node = Node(node.depth + 1, node.lo + k, node.hi, mid + 1, node.b)
        visits.node_visits += 1
        return t

    def select(self, c: int, j: int) -> Optional[int]:
        """Position of the j-th occurrence of c, or None past the last one."""
        if j < 1:
            raise ValueError("select ordinal must be >= 1")
        code = self.code_of(c)
        if code is None:
            return None
        visits = self.stats
        node = self.root()
        path = []
        while node.a != node.b:
            visits.node_visits += 1
            left, right = self.children(node)
            mid = node.a + (node.b - node.a) // 2
            went_left = code <= mid
            path.append((node, went_left))
            node = left if went_left else right
        visits.node_visits += 1
        if j > node.hi - node.lo + 1:
            return None
        pos = j
        for parent, went_left in reversed(path):
            lv = self.levels[parent.depth]
            ones_lo = lv.rank1(parent.lo - 1)
            if went_left:
                zeros_lo = parent.lo - 1 - ones_lo
                abs_pos = lv.select0(zeros_lo + pos)
            else:
                abs_pos = lv.select1(ones_lo + pos)
            assert abs_pos is not None
            pos = abs_pos - parent.lo + 1
        return pos

    # --- range queries --------------------------------------------------------

    def _check_span(self, xs: int, xe: int) -> None:
        if xs < 1 or xe > self.n:
            raise ValueError(f"positions [{xs}, {xe}] out of range [1, {self.n}]")

    def count(self, xs: int, xe: int, ys: int, ye: int) -> int:
        """Number of positions i in [xs,xe] with ys <= S[i] <= ye."""
        if xs > xe:
            return 0
        self._check_span(xs, xe)
        ya, yb = self.code_range(ys, ye)
        if ya > yb:
            return 0
        return self._count(self.root(), xs, xe, ya, yb)

    def _count(self, node: Node, qi: int, qj: int, ya: int, yb: int) -> int:
        self.stats.node_visits += 1
        if qi > qj or node.b < ya or yb < node.a:
            return 0
        if ya <= node.a and node.b <= yb:
            return qj - qi + 1
        left, lqi, lqj, right, rqi, rqj = self.split(node, qi, qj)
        return self._count(left, lqi, lqj, ya, yb) + self._count(
            right, rqi, rqj, ya, yb
        )

    def report(
        self, xs: int, xe: int, ys: int, ye: int
    ) -> Iterator[Tuple[int, int]]:
        """Yield (symbol, frequency) for each distinct symbol of S[xs..xe]
        inside [ys,ye], in increasing symbol order."""
        if xs > xe:
            return
        self._check_span(xs, xe)
        ya, yb = self.code_range(ys, ye)
        if ya > yb:
            return
        yield from self._report(self.root(), xs, xe, ya, yb)

    def _report(
        self, node: Node, qi: int, qj: int, ya: int, yb: int
    ) -> Iterator[Tuple[int, int]]:
        self.stats.node_visits += 1
        if qi > qj or node.b < ya or yb < node.a:
            return
        if node.a == node.b:
            yield self.symbol_of(node.a), qj - qi + 1
            return
        left, lqi, lqj, right, rqi, rqj = self.split(node, qi, qj)
        yield from self._report(left, lqi, lqj, ya, yb)
        yield from self._report(right, rqi, rqj, ya, yb)

    # --- introspection ----------------------------------------------------------

    def node_bits(self, node: Node) -> str:
        """The node's bitmap as a '0'/'1' string (empty for leaves)."""
        if node.a == node.b:
            return ""
        lv = self.levels[node.depth]
        return "".join(str(lv.access(p)) for p in range(node.lo, node.hi + 1))

    def node_sequence(self, node: Node) -> List[int]:
        """The subsequence of original symbols handled at ``node``."""
        out = []
        for p in range(node.lo, node.hi + 1):
            cur, pos = node, p
            while cur.a != cur.b:
                lv = self.levels[cur.depth]
                ones_lo = lv.rank1(cur.lo - 1)
                r1_p = lv.rank1(pos)
                left, right = self.children(cur)
                if lv.access(pos):
                    pos = right.lo + (r1_p - ones_lo) - 1
                    cur = right
                else:
                    zeros = (pos - r1_p) - (cur.lo - 1 - ones_lo)
                    pos = left.lo + zeros - 1
                    cur = left
            out.append(self.symbol_of(cur.a))
        return out

    # --- space accounting ---------------------------------------------------------

    @property
    def bitmap_bits(self) -> int:
        return sum(lv.payload_bits for lv in self.levels)

    @property
    def aux_bits(self) -> int:
        extra = sum(lv.aux_bits for lv in self.levels)
        if self.alpha_map is not None:
            extra += self.alpha_map.bits_used
        return extra

    # --- serialization ---------------------------------------------------------------

    def write(self, out: BinaryIO) -> None:
        flags = 0 if self.alpha_map is None else 1
        out.write(_MAGIC)
        out.write(
            struct.pack(
                "<QQQQQ", self.n, self.sigma, self.distinct, self.height, flags
            )
        )
        if self.alpha_map is not None:
            self.alpha_map.write(out)
        for lv in self.levels:
            lv.write(out)

    @classmethod
    def read(cls, inp: BinaryIO) -> "WaveletTree":
        if inp.read(4) != _MAGIC:
            raise ValueError("bad wavelet tree magic")
        n, sigma, distinct, height, flags = struct.unpack("<QQQQQ", inp.read(40))
        wt = cls.__new__(cls)
        wt.n, wt.sigma, wt.distinct, wt.height = n, sigma, distinct, height
        if flags & 1:
            wt.alpha_map = SparseBitVec.read(inp)
            wt.leafspan = distinct
        else:
            wt.alpha_map = None
            wt.leafspan = sigma
        wt.levels = [BitVec.read(inp) for _ in range(height)]
        wt.stats = QueryStats()
        return wt

    def __repr__(self) -> str:
        return (
            f"WaveletTree(n={self.n}, sigma={self.sigma}, "
            f"u={self.distinct}, height={self.height})"
        )
