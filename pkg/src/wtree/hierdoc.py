"""Hierarchical (XML-like) retrievable units over a document index.

The XML tree is flattened to a balanced-parentheses sequence P (open=1,
close=0, preorder), a tag sequence over the parentheses (a wavelet tree),
and one parentheses sequence per tag. Text occurs only at tree leaves; a
text run between structural elements becomes a synthetic leaf carrying a
reserved pseudo-tag, and childless elements are leaves with empty text.
Each leaf is a document of the underlying DocIndex, numbered in preorder.

``expand_tag`` finds the lowest ancestor-or-self of a leaf carrying a given
tag; ``hdlist``/``hdint``/``hdfreq`` list, intersect, and count pattern
occurrences per retrievable unit. ``UnitMask`` supports the same expansion
for an arbitrary (static) set of marked nodes.

Same-tag nesting caveat: hdlist scans left to right and jumps past each
reported unit, so a unit nested inside an already reported same-tag unit is
not reported separately; hdint follows the same convention. For collections
where a tag never nests within itself (the common document-structure case)
this coincides with reporting every lowest tagged ancestor.
"""

from __future__ import annotations

import struct
from typing import BinaryIO, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .bitvec import BitVec
from .docindex import DocIndex
from .rangeops import RnvFinger
from .wavelet import Node, WaveletTree

_BLOCK = 64


class XmlError(ValueError):
    """Malformed minimal-XML input; ``position`` is a 1-based byte offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at byte {position})")
        self.position = position


class _Elem:
    __slots__ = ("tag", "children", "pos")

    def __init__(self, tag: str, pos: int):
        self.tag = tag
        self.children: List[Union["_Elem", "_Text"]] = []
        self.pos = pos


class _Text:
    __slots__ = ("data",)

    def __init__(self, data: bytes):
        self.data = data


_WS = b" \t\r\n"


def _is_name_start(ch: int) -> bool:
    return ch == 0x5F or 0x41 <= ch <= 0x5A or 0x61 <= ch <= 0x7A


def _is_name_char(ch: int) -> bool:
    return _is_name_start(ch) or 0x30 <= ch <= 0x39 or ch in (0x2D, 0x2E)


def parse_xml(data: Union[bytes, str]) -> _Elem:
    """Parse a minimal well-formed XML subset: tags and text only.

    No attributes, namespaces, entities, comments, or declarations; any of
    those is rejected with a position diagnostic.
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    n = len(data)
    i = 0
    root: Optional[_Elem] = None
    stack: List[_Elem] = []

    def read_name(at: int) -> Tuple[str, int]:
        j = at
        if j >= n or not _is_name_start(data[j]):
            raise XmlError("malformed tag name", at + 1)
        while j < n and _is_name_char(data[j]):
            j += 1
        return data[at:j].decode("ascii"), j

    while i < n:
        if data[i] == 0x3C:  # '<'
            if i + 1 < n and data[i + 1] == 0x2F:  # '</'
                name, j = read_name(i + 2)
                if j >= n or data[j] != 0x3E:
                    raise XmlError("malformed closing tag", j + 1)
                if not stack:
                    raise XmlError(f"unmatched closing tag '{name}'", i + 1)
                elem = stack.pop()
                if elem.tag != name:
                    raise XmlError(
                        f"closing tag '{name}' does not match open '<{elem.tag}>'",
                        i + 1,
                    )
                i = j + 1
            else:
                name, j = read_name(i + 1)
                if j >= n or data[j] != 0x3E:
                    raise XmlError(
                        "expected '>' after tag name (attributes are not supported)",
                        j + 1,
                    )
                if root is not None and not stack:
                    raise XmlError("content after the root element", i + 1)
                elem = _Elem(name, i + 1)
                if stack:
                    stack[-1].children.append(elem)
                else:
                    root = elem
                stack.append(elem)
                i = j + 1
        else:
            j = data.find(b"<", i)
            if j < 0:
                j = n
            run = data[i:j]
            if run.strip(_WS):
                if not stack:
                    raise XmlError("text outside the root element", i + 1)
                stack[-1].children.append(_Text(run))
            i = j
    if stack:
        raise XmlError(f"unclosed element '<{stack[-1].tag}>'", stack[-1].pos)
    if root is None:
        raise XmlError("no root element", 1)
    return root


class ParenTree:
    """Balanced parentheses (1=open, 0=close) with excess-block navigation.

    Navigation is O(blocks + block size) per operation via per-block
    min/max prefix-excess summaries.
    """

    def __init__(self, bits: Union[BitVec, Sequence[int], str]):
        self.bv = bits if isinstance(bits, BitVec) else BitVec(bits)
        self.n2 = len(self.bv)
        arr = self.bv.to_bits01().astype(np.int64)
        self._bits = arr.tolist()
        steps = 2 * arr - 1
        cum = np.cumsum(steps) if self.n2 else np.zeros(0, dtype=np.int64)
        if self.n2:
            if self.n2 % 2 or cum[-1] != 0 or cum.min() < 0:
                raise ValueError("parenthesis sequence is not balanced")
            starts = np.arange(0, self.n2, _BLOCK)
            self._bmin = np.minimum.reduceat(cum, starts).tolist()
            self._bmax = np.maximum.reduceat(cum, starts).tolist()
            self._before = np.concatenate([[0], cum[starts[1:] - 1]]).tolist()
        else:
            self._bmin = self._bmax = self._before = []

    def excess(self, q: int) -> int:
        """rank_open(q) - rank_close(q); tree depth after position q."""
        return 2 * self.bv.rank1(q) - q

    def is_open(self, p: int) -> bool:
        return self._bits[p - 1] == 1

    def _bwd(self, s: int, v: int) -> Optional[int]:
        """Largest q in [0, s] with excess(q) == v, else None."""
        bits = self._bits
        if s >= 1:
            k = (s - 1) // _BLOCK
            e = self.excess(s)
            q = s
            while q > k * _BLOCK:
                if e == v:
                    return q
                e -= 2 * bits[q - 1] - 1
                q -= 1
        else:
            k = 0
        for kk in range(k - 1, -1, -1):
            if self._bmin[kk] <= v <= self._bmax[kk]:
                q = (kk + 1) * _BLOCK
                e = self._before[kk + 1]
                while q > kk * _BLOCK:
                    if e == v:
                        return q
                    e -= 2 * bits[q - 1] - 1
                    q -= 1
        return 0 if v == 0 else None

    def find_close(self, p: int) -> int:
        """Matching close of the open parenthesis at p."""
        if not self.is_open(p):
            raise ValueError(f"position {p} is not an open parenthesis")
        bits = self._bits
        target = self.excess(p) - 1
        k = (p - 1) // _BLOCK
        q = p
        e = target + 1
        end = min(self.n2, (k + 1) * _BLOCK)
        while q < end:
            q += 1
            e += 2 * bits[q - 1] - 1
            if e == target:
                return q
        for kk in range(k + 1, len(self._bmin)):
            if self._bmin[kk] <= target <= self._bmax[kk]:
                q = kk * _BLOCK
                e = self._before[kk]
                end = min(self.n2, (kk + 1) * _BLOCK)
                while q < end:
                    q += 1
                    e += 2 * bits[q - 1] - 1
                    if e == target:
                        return q
        raise ValueError(f"no matching close for position {p}")

    def find_open(self, c: int) -> int:
        """Matching open of the close parenthesis at c."""
        if self.is_open(c):
            raise ValueError(f"position {c} is not a close parenthesis")
        q = self._bwd(c - 1, self.excess(c))
        assert q is not None
        return q + 1

    def parent(self, p: int) -> Optional[int]:
        """Open position of the parent of the node opened at p."""
        e = self.excess(p)
        if e < 2:
            return None
        q = self._bwd(p - 1, e - 2)
        return None if q is None else q + 1

    def parent_of_close(self, c: int) -> Optional[int]:
        """Open position of the node enclosing the close parenthesis at c."""
        e = self.excess(c)
        if e < 1:
            return None
        q = self._bwd(c - 1, e - 1)
        return None if q is None else q + 1

    def subtree_size(self, p: int) -> int:
        return (self.find_close(p) - p + 1) // 2

    def __len__(self) -> int:
        return self.n2


class UnitMask:
    """A static set of marked nodes (matched open/close pairs in P)."""

    def __init__(self, hier: "HierIndex", opens: Sequence[int]):
        if not opens:
            raise ValueError("unit mask must mark at least one node")
        marked = []
        for p in sorted(set(opens)):
            if not hier.ptree.is_open(p):
                raise ValueError(f"mask position {p} is not an open parenthesis")
            marked.append(p)
            marked.append(hier.ptree.find_close(p))
        marked.sort()
        bits = np.zeros(hier.ptree.n2, dtype=np.uint8)
        bits[np.asarray(marked) - 1] = 1
        self.bv = BitVec(bits)
        self.sub = ParenTree([hier.ptree._bits[p - 1] for p in marked])

    @classmethod
    def from_tag(cls, hier: "HierIndex", t: int) -> "UnitMask":
        total = hier.tag.rank(t, hier.ptree.n2)
        opens = []
        for r in range(1, total + 1):
            p = hier.tag.select(t, r)
            if hier.ptree.is_open(p):
                opens.append(p)
        return cls(hier, opens)


class HierIndex:
    """Retrievable-unit layer: parentheses topology + tags + DocIndex."""

    TEXT_TAG = "#text"

    def __init__(self, root: _Elem):
        tags = sorted({e.tag for e in _walk_elems(root)})
        self.tau = len(tags)
        self.tag_names = tags
        self._tag_ids: Dict[str, int] = {t: i for i, t in enumerate(tags, start=1)}
        text_id = self.tau + 1
        pbits: List[int] = []
        tagseq: List[int] = []
        leaf_close: List[int] = []
        docs: List[bytes] = []
        empty: List[int] = []
        # iterative preorder: (node, entering) pairs
        stack: List[Tuple[Union[_Elem, _Text], bool]] = [(root, True)]
        while stack:
            node, entering = stack.pop()
            if not entering:
                pbits.append(0)
                tagseq.append(self._tag_ids[node.tag])
                continue
            if isinstance(node, _Text):
                pbits.append(1)
                tagseq.append(text_id)
                pbits.append(0)
                tagseq.append(text_id)
                leaf_close.append(len(pbits))
                docs.append(node.data)
                empty.append(0)
                continue
            tid = self._tag_ids[node.tag]
            pbits.append(1)
            tagseq.append(tid)
            if node.children:
                stack.append((node, False))
                for child in reversed(node.children):
                    stack.append((child, True))
            else:
                pbits.append(0)
                tagseq.append(tid)
                leaf_close.append(len(pbits))
                docs.append(b"")
                empty.append(1)
        self.ptree = ParenTree(pbits)
        self.tag = WaveletTree(tagseq, sigma=text_id)
        leafbits = np.zeros(len(pbits), dtype=np.uint8)
        leafbits[np.asarray(leaf_close) - 1] = 1
        self.leafbv = BitVec(leafbits)
        self.m = len(docs)
        emptyarr = np.asarray(empty, dtype=np.uint8)
        self.empty_leaf = BitVec(emptyarr)
        self.ptags: Dict[int, ParenTree] = {}
        tagarr = np.asarray(tagseq)
        parr = np.asarray(pbits, dtype=np.uint8)
        for t in range(1, self.tau + 1):
            self.ptags[t] = ParenTree(parr[tagarr == t])
        self.doc = DocIndex(docs)

    @classmethod
    def from_xml(cls, data: Union[bytes, str]) -> "HierIndex":
        return cls(parse_xml(data))

    # --- basic unit navigation ---------------------------------------------

    def tag_id(self, name: str) -> Optional[int]:
        return self._tag_ids.get(name)

    def _check_tag(self, t: int) -> None:
        if not 1 <= t <= self.tau:
            raise ValueError(f"tag id {t} out of range [1, {self.tau}]")

    def _check_leaf(self, i: int) -> None:
        if not 1 <= i <= self.m:
            raise ValueError(f"leaf id {i} out of range [1, {self.m}]")

    def leaf_open(self, i: int) -> int:
        """Open position in P of the i-th leaf (document i)."""
        self._check_leaf(i)
        close = self.leafbv.select1(i)
        assert close is not None
        return close - 1

    def rank_leaf(self, x: int) -> int:
        """Number of leaves whose subtree lies entirely at positions <= x."""
        return self.leafbv.rank1(min(x, self.ptree.n2))

    def expand_tag(self, t: int, i: int) -> Optional[int]:
        """Node handle of the lowest ancestor-or-self of leaf i tagged t."""
        self._check_tag(t)
        j = self.leaf_open(i)
        r = self.tag.rank(t, j)
        if r == 0:
            return None
        pt = self.ptags[t]
        if not pt.is_open(r):
            q = pt.parent_of_close(r)
            if q is None:
                return None
            r = q
        return self.tag.select(t, r)

    def leaf_range(self, p: int) -> Tuple[int, int]:
        """Contiguous document interval below the node opened at p."""
        if not self.ptree.is_open(p):
            raise ValueError(f"handle {p} is a close parenthesis")
        close = self.ptree.find_close(p)
        return self.rank_leaf(p) + 1, self.rank_leaf(close)

    def expand_marked(self, mask: UnitMask, i: int) -> Optional[Tuple[int, int]]:
        """Document interval of the lowest marked node covering leaf i."""
        j = self.leaf_open(i)
        r = mask.bv.rank1(j)
        if r == 0:
            return None
        if not mask.sub.is_open(r):
            q = mask.sub.parent_of_close(r)
            if q is None:
                return None
            r = q
        p = mask.bv.select1(r)
        assert p is not None
        return self.leaf_range(p)

    # --- pattern queries over units ---------------------------------------------

    def hdfreq(self, q: bytes, p: int) -> int:
        """Occurrences of q within the subtree of the node opened at p."""
        interval = self.doc.pattern_search(q)
        if interval is None:
            return 0
        sp, ep = interval
        dl, dr = self.leaf_range(p)
        return self.doc.da.count(sp, ep, dl, dr)

    def hdlist(
        self,
        t: int,
        q: bytes,
        dmin: Optional[int] = None,
        dmax: Optional[int] = None,
        with_freq: bool = False,
    ) -> Iterator:
        """Lowest units tagged t holding an occurrence of q, left to right.

        Produced by alternating next-value probes on the document array and
        tag expansions; each reported unit is jumped past, and leaves with
        no tagged ancestor are skipped.
        """
        self._check_tag(t)
        lo = 1 if dmin is None else dmin
        hi = self.m if dmax is None else dmax
        if lo < 1 or hi > self.m:
            raise ValueError(f"document range [{lo}, {hi}] out of [1, {self.m}]")
        interval = self.doc.pattern_search(q)
        if interval is None:
            return
        sp, ep = interval
        finger = RnvFinger(self.doc.da, sp, ep)
        x = lo
        while x <= self.m:
            got = finger.next(x)
            if got is None:
                return
            d = got[0]
            if d > hi:
                return
            p = self.expand_tag(t, d)
            if p is None:
                x = d + 1
                continue
            if with_freq:
                yield p, self.hdfreq(q, p)
            else:
                yield p
            x = self.leaf_range(p)[1] + 1

    def _snap_range(self, t: int, lo: int, hi: int) -> Tuple[int, int]:
        p = self.expand_tag(t, lo)
        if p is not None:
            lo = min(lo, self.leaf_range(p)[0])
        p = self.expand_tag(t, hi)
        if p is not None:
            hi = max(hi, self.leaf_range(p)[1])
        return lo, hi

    def hdint(
        self,
        t: int,
        q1: bytes,
        q2: bytes,
        dmin: Optional[int] = None,
        dmax: Optional[int] = None,
    ) -> Iterator[Tuple[int, int, int]]:
        """Units tagged t containing both patterns, with both frequencies.

        Walks the document-array wavelet tree over both occurrence intervals
        at once; before splitting a node it tests whether one unit covers the
        boundary document pair and, if so, reports it between the two child
        recursions and excludes its document range from both. The document
        range is snapped outward to unit boundaries first.
        """
        self._check_tag(t)
        lo = 1 if dmin is None else dmin
        hi = self.m if dmax is None else dmax
        if lo < 1 or hi > self.m:
            raise ValueError(f"document range [{lo}, {hi}] out of [1, {self.m}]")
        iv1 = self.doc.pattern_search(q1)
        iv2 = self.doc.pattern_search(q2)
        if iv1 is None or iv2 is None:
            return
        lo, hi = self._snap_range(t, lo, hi)
        da = self.doc.da
        # doc ids are always dense in the document array (every document
        # contributes at least its terminator suffix)
        assert da.alpha_map is None
        sp1, ep1 = iv1
        sp2, ep2 = iv2
        seen: set = set()

        def freqs(dl: int, dr: int) -> Tuple[int, int]:
            return da.count(sp1, ep1, dl, dr), da.count(sp2, ep2, dl, dr)

        def rec(
            node: Node, i1: int, j1: int, i2: int, j2: int, rlo: int, rhi: int
        ) -> Iterator[Tuple[int, int, int]]:
            da.stats.node_visits += 1
            if rlo > rhi or i1 > j1 or i2 > j2:
                return
            la, lb = node.a + 1, node.b + 1
            if lb < rlo or rhi < la:
                return
            if node.a == node.b:
                p = self.expand_tag(t, la)
                if p is None or p in seen:
                    return
                dl, dr = self.leaf_range(p)
                f1, f2 = freqs(dl, dr)
                if f1 > 0 and f2 > 0:
                    seen.add(p)
                    yield p, f1, f2
                return
            left, l1i, l1j, right, r1i, r1j = da.split(node, i1, j1)
            _, l2i, l2j, _, r2i, r2j = da.split(node, i2, j2)
            d_b = left.b + 1  # largest document id under the left child
            cut = None
            pl = None
            f1 = f2 = 0
            left_active = l1i <= l1j or l2i <= l2j
            right_active = r1i <= r1j or r2i <= r2j
            if left_active and right_active and rlo <= d_b < rhi:
                pl = self.expand_tag(t, d_b)
                pr = self.expand_tag(t, d_b + 1)
                if pl is not None and pl == pr:
                    cut = self.leaf_range(pl)
                    f1, f2 = freqs(*cut)
            lrng = (max(rlo, la), min(rhi, d_b))
            rrng = (max(rlo, d_b + 1), min(rhi, lb))
            if cut is not None:
                lrng = (lrng[0], min(lrng[1], cut[0] - 1))
                rrng = (max(rrng[0], cut[1] + 1), rrng[1])
            yield from rec(left, l1i, l1j, l2i, l2j, *lrng)
            if cut is not None and f1 > 0 and f2 > 0 and pl not in seen:
                seen.add(pl)
                yield pl, f1, f2
            yield from rec(right, r1i, r1j, r2i, r2j, *rrng)

        yield from rec(da.root(), sp1, ep1, sp2, ep2, lo, hi)

    # --- space accounting ---------------------------------------------------------

    @property
    def bit_report(self) -> dict:
        return {
            "parens_bits": self.ptree.bv.payload_bits + self.ptree.bv.aux_bits,
            "tag_bits": self.tag.bitmap_bits + self.tag.aux_bits,
            "per_tag_parens_bits": sum(
                pt.bv.payload_bits + pt.bv.aux_bits for pt in self.ptags.values()
            ),
            "leaf_bits": self.leafbv.payload_bits + self.leafbv.aux_bits,
        }

    # --- serialization ---------------------------------------------------------------

    def write(self, out: BinaryIO, store_text: bool = True) -> None:
        out.write(struct.pack("<QQQ", self.tau, self.ptree.n2, self.m))
        for name in self.tag_names:
            raw = name.encode("utf-8")
            out.write(struct.pack("<Q", len(raw)))
            out.write(raw)
        self.ptree.bv.write(out)
        self.leafbv.write(out)
        self.empty_leaf.write(out)
        self.tag.write(out)
        for tid in range(1, self.tau + 1):
            self.ptags[tid].bv.write(out)
        self.doc.write(out, store_text=store_text)

    @classmethod
    def read(cls, inp: BinaryIO) -> "HierIndex":
        tau, n2, m = struct.unpack("<QQQ", inp.read(24))
        hier = cls.__new__(cls)
        hier.tau = tau
        names = []
        for _ in range(tau):
            (ln,) = struct.unpack("<Q", inp.read(8))
            names.append(inp.read(ln).decode("utf-8"))
        hier.tag_names = names
        hier._tag_ids = {t: i for i, t in enumerate(names, start=1)}
        hier.ptree = ParenTree(BitVec.read(inp))
        hier.leafbv = BitVec.read(inp)
        hier.empty_leaf = BitVec.read(inp)
        hier.tag = WaveletTree.read(inp)
        hier.ptags = {
            tid: ParenTree(BitVec.read(inp)) for tid in range(1, tau + 1)
        }
        hier.m = m
        hier.doc = DocIndex.read(inp)
        return hier

    def __repr__(self) -> str:
        return f"HierIndex(nodes={self.ptree.n2 // 2}, tau={self.tau}, m={self.m})"


def _walk_elems(root: _Elem) -> Iterator[_Elem]:
    stack = [root]
    while stack:
        node = stack.pop()
        if isinstance(node, _Elem):
            yield node
            stack.extend(node.children)
