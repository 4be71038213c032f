"""Dual-mode inverted index over one wavelet tree.

All postings lists are concatenated, each sorted by non-increasing term
frequency (ties by increasing document id), into a single sequence of
document ids represented as a wavelet tree. That one structure serves both
retrieval styles: the stored order is the ranked-retrieval list L_t, while
range-quantile and next-value queries recover the docid-ordered view F_t on
the fly, including segments, fingered iterators, and k-way thresholded
intersections. Term frequencies are kept run-length encoded per list (one
bitmap of distinct tf values, one of run starts), giving constant-time
tf lookups and threshold prefixes without storing a tf array.

Stemming: the vocabulary is ordered so that variants of one stem are
contiguous (plain lexicographic order by default; an explicit stem map
overrides the grouping). Every docid-ordered operation also accepts a
``(t, t2)`` term range and then works on the merged view of those lists.
"""

from __future__ import annotations

import re
import struct
from bisect import bisect_left
from typing import (
    BinaryIO,
    Dict,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from .bitvec import BitVec, SparseBitVec
from .rangeops import QuantileFinger, RnvFinger, mrqq, rint, rqq
from .wavelet import WaveletTree

_TOKEN = re.compile(r"[^\W_]+", re.UNICODE)

TermSpec = Union[int, Tuple[int, int]]


def tokenize(text: str) -> List[str]:
    """Lowercase and split on non-alphanumeric runs."""
    return _TOKEN.findall(text.lower())


class InvIndex:
    """Concatenated frequency-ordered postings in a wavelet tree."""

    def __init__(
        self,
        doc_tokens: Sequence[Sequence[str]],
        stem_map: Optional[Dict[str, str]] = None,
    ):
        if not doc_tokens:
            raise ValueError("corpus must hold at least one document")
        self.m = len(doc_tokens)
        stem_map = stem_map or {}
        postings: Dict[str, Dict[int, int]] = {}
        total = 0
        for d, tokens in enumerate(doc_tokens, start=1):
            for w in tokens:
                postings.setdefault(w, {})[d] = postings.get(w, {}).get(d, 0) + 1
                total += 1
        if not postings:
            raise ValueError("corpus has no tokens")
        self.N = total
        # vocabulary order keeps stem variants contiguous
        self.vocab = sorted(postings, key=lambda w: (stem_map.get(w, w), w))
        self._stems = [stem_map.get(w, w) for w in self.vocab]
        self._ids = {w: t for t, w in enumerate(self.vocab, start=1)}
        self.nu = len(self.vocab)
        seq: List[int] = []
        starts: List[int] = []
        self._tf_enc: List[Tuple[BitVec, BitVec]] = []
        for w in self.vocab:
            plist = sorted(postings[w].items(), key=lambda df: (-df[1], df[0]))
            starts.append(len(seq) + 1)
            seq.extend(d for d, _ in plist)
            tfs = [f for _, f in plist]
            m_t = tfs[0]
            tbits = np.zeros(m_t, dtype=np.uint8)
            tbits[np.asarray(sorted(set(tfs))) - 1] = 1
            rbits = np.zeros(len(tfs), dtype=np.uint8)
            rbits[0] = 1
            for i in range(1, len(tfs)):
                if tfs[i] != tfs[i - 1]:
                    rbits[i] = 1
            self._tf_enc.append((BitVec(tbits), BitVec(rbits)))
        self.n = len(seq)
        self.bounds = SparseBitVec(starts, self.n)
        self.postings = WaveletTree(seq, sigma=self.m)

    @classmethod
    def from_texts(
        cls, texts: Sequence[str], stem_map: Optional[Dict[str, str]] = None
    ) -> "InvIndex":
        return cls([tokenize(t) for t in texts], stem_map=stem_map)

    # --- vocabulary -----------------------------------------------------------

    def term_id(self, word: str) -> Optional[int]:
        return self._ids.get(word)

    def term_string(self, t: int) -> str:
        self._check_term(t)
        return self.vocab[t - 1]

    def stem_range(self, prefix: str) -> Optional[Tuple[int, int]]:
        """Contiguous id interval of terms whose stem starts with prefix."""
        lo = bisect_left(self._stems, prefix)
        hi = lo
        while hi < self.nu and self._stems[hi].startswith(prefix):
            hi += 1
        if lo == hi:
            return None
        return lo + 1, hi

    # --- list geometry ------------------------------------------------------------

    def _check_term(self, t: int) -> None:
        if not 1 <= t <= self.nu:
            raise ValueError(f"term id {t} out of range [1, {self.nu}]")

    def _span(self, term: TermSpec) -> Tuple[int, int]:
        """Absolute interval of a term or contiguous term range inside L."""
        if isinstance(term, tuple):
            t, t2 = term
            if t > t2:
                raise ValueError(f"term range [{t}, {t2}] is empty")
        else:
            t = t2 = term
        self._check_term(t)
        self._check_term(t2)
        s = self.bounds.select1(t)
        e = self.bounds.select1(t2 + 1)
        return s, (self.n if e is None else e - 1)

    def list_start(self, t: int) -> int:
        self._check_term(t)
        return self.bounds.select1(t)

    def term_of_position(self, i: int) -> int:
        """The term whose list holds position i of the concatenation."""
        if not 1 <= i <= self.n:
            raise ValueError(f"position {i} out of range [1, {self.n}]")
        return self.bounds.rank1(i)

    def df(self, term: TermSpec) -> int:
        s, e = self._span(term)
        return e - s + 1

    # --- ranked-retrieval view (stored order) ------------------------------------------

    def tf_at(self, t: int, i: int) -> int:
        """tf of the i-th entry of the frequency-ordered list of term t."""
        s, e = self._span(t)
        if not 1 <= i <= e - s + 1:
            raise ValueError(f"offset {i} out of list [1, {e - s + 1}]")
        tvec, rvec = self._tf_enc[t - 1]
        v = tvec.total_ones
        pos = tvec.select1(v - rvec.rank1(i) + 1)
        assert pos is not None
        return pos

    def lt_get(self, t: int, i: int) -> int:
        """The i-th entry of the frequency-ordered list of term t."""
        s, e = self._span(t)
        if not 1 <= i <= e - s + 1:
            raise ValueError(f"offset {i} out of list [1, {e - s + 1}]")
        return self.postings.access(s + i - 1)

    def lt_segment(
        self, t: int, i: int, i2: int, with_tf: bool = False
    ) -> Iterator:
        """Documents of list slots i..i2 of term t, in increasing doc order."""
        s, e = self._span(t)
        size = e - s + 1
        if not 1 <= i <= i2 <= size:
            raise ValueError(f"segment [{i}, {i2}] out of list [1, {size}]")
        for d, _ in self.postings.report(s + i - 1, s + i2 - 1, 1, self.m):
            if with_tf:
                _, off = self.contains(t, d)
                yield d, self.tf_at(t, off)
            else:
                yield d

    def persin_prefix(self, t: int, f: int) -> int:
        """Length of the leading list part whose term frequencies are >= f."""
        if f < 1:
            raise ValueError("tf threshold must be >= 1")
        self._check_term(t)
        tvec, rvec = self._tf_enc[t - 1]
        v = tvec.total_ones
        m_t = len(tvec)
        r = v - tvec.rank1(min(f, m_t + 1) - 1)
        if r == v:
            return self.df(t)
        if r == 0:
            return 0
        pos = rvec.select1(r + 1)
        assert pos is not None
        return pos - 1

    def persin_round(
        self, accumulator: List[Tuple[int, int]], t: int, f: int
    ) -> List[Tuple[int, int]]:
        """Merge the tf >= f prefix of term t into a (doc, score) list,
        accumulating raw tf for documents already present."""
        p = self.persin_prefix(t, f)
        if p == 0:
            return list(accumulator)
        fresh = list(self.lt_segment(t, 1, p, with_tf=True))
        out: List[Tuple[int, int]] = []
        a = b = 0
        while a < len(accumulator) and b < len(fresh):
            da, sa = accumulator[a]
            db, sb = fresh[b]
            if da == db:
                out.append((da, sa + sb))
                a += 1
                b += 1
            elif da < db:
                out.append((da, sa))
                a += 1
            else:
                out.append((db, sb))
                b += 1
        out.extend(accumulator[a:])
        out.extend(fresh[b:])
        return out

    # --- full-text view (docid order, computed) --------------------------------------------

    def ft_get(self, term: TermSpec, k: int) -> int:
        """The k-th document of the docid-ordered view of a term or range."""
        s, e = self._span(term)
        if not 1 <= k <= e - s + 1:
            raise ValueError(f"k={k} out of list [1, {e - s + 1}]")
        return rqq(self.postings, s, e, k)[0]

    def ft_segment(self, term: TermSpec, k: int, k2: int) -> Iterator[int]:
        """Documents at docid-ordered positions k..k2, in order (a document
        repeats when several terms of a range contain it)."""
        s, e = self._span(term)
        size = e - s + 1
        if not 1 <= k <= k2 <= size:
            raise ValueError(f"segment [{k}, {k2}] out of list [1, {size}]")
        for d, f in mrqq(self.postings, s, e, k, k2):
            for _ in range(f):
                yield d

    def ft_iter(self, term: TermSpec) -> "FtIterator":
        return FtIterator(self, term)

    def term_docs(self, term: TermSpec) -> Iterator[Tuple[int, int]]:
        """Distinct documents of a term or merged term range, ascending,
        each with the number of covered lists containing it."""
        s, e = self._span(term)
        yield from self.postings.report(s, e, 1, self.m)

    def intersect(
        self,
        terms: Sequence[TermSpec],
        threshold: Optional[int] = None,
        dmin: Optional[int] = None,
        dmax: Optional[int] = None,
    ) -> Iterator[Tuple[int, Tuple[int, ...]]]:
        """Documents appearing in at least ``threshold`` of the given term
        lists (ranges allowed), ascending, with per-list entry counts."""
        if not terms:
            raise ValueError("intersect needs at least one term")
        lo = 1 if dmin is None else dmin
        hi = self.m if dmax is None else dmax
        if lo < 1 or hi > self.m:
            raise ValueError(f"document range [{lo}, {hi}] out of [1, {self.m}]")
        ranges = [self._span(term) for term in terms]
        yield from rint(self.postings, ranges, t=threshold, rng=(lo, hi))

    # --- per-document operations ------------------------------------------------------------

    def local_vocab(self, d: int) -> Iterator[int]:
        """All terms occurring in document d, strictly increasing."""
        if not 1 <= d <= self.m:
            raise ValueError(f"document {d} out of range [1, {self.m}]")
        i = 1
        while True:
            pos = self.postings.select(d, i)
            if pos is None:
                return
            yield self.bounds.rank1(pos)
            i += 1

    def contains(self, t: int, d: int) -> Tuple[bool, Optional[int]]:
        """Whether document d occurs in list t; if so, also its list offset."""
        s, e = self._span(t)
        if not 1 <= d <= self.m:
            raise ValueError(f"document {d} out of range [1, {self.m}]")
        before = self.postings.rank(d, s - 1)
        if self.postings.rank(d, e) - before == 0:
            return False, None
        pos = self.postings.select(d, before + 1)
        assert pos is not None
        return True, pos - s + 1

    def tf(self, t: int, d: int) -> int:
        """tf of term t in document d (0 when absent)."""
        present, off = self.contains(t, d)
        return self.tf_at(t, off) if present else 0

    def sum_tf_stemmed(self, term_range: Tuple[int, int], d: int) -> int:
        """Total tf of document d over a contiguous term range."""
        s, e = self._span(term_range)
        if not 1 <= d <= self.m:
            raise ValueError(f"document {d} out of range [1, {self.m}]")
        total = 0
        i = self.postings.rank(d, s - 1) + 1
        while True:
            pos = self.postings.select(d, i)
            if pos is None or pos > e:
                return total
            t = self.bounds.rank1(pos)
            total += self.tf_at(t, pos - self.bounds.select1(t) + 1)
            i += 1

    # --- space accounting ---------------------------------------------------------------------

    @property
    def bit_report(self) -> dict:
        return {
            "postings_bits": self.postings.bitmap_bits,
            "postings_aux_bits": self.postings.aux_bits,
            "bounds_bits": self.bounds.bits_used,
            "tf_bits": sum(
                t.payload_bits + t.aux_bits + r.payload_bits + r.aux_bits
                for t, r in self._tf_enc
            ),
        }

    # --- serialization ------------------------------------------------------------------------

    def write(self, out: BinaryIO) -> None:
        out.write(struct.pack("<QQQQ", self.m, self.nu, self.n, self.N))
        for w, stem in zip(self.vocab, self._stems):
            for raw in (w.encode("utf-8"), stem.encode("utf-8")):
                out.write(struct.pack("<Q", len(raw)))
                out.write(raw)
        self.bounds.write(out)
        self.postings.write(out)
        for tvec, rvec in self._tf_enc:
            tvec.write(out)
            rvec.write(out)

    @classmethod
    def read(cls, inp: BinaryIO) -> "InvIndex":
        m, nu, n, total = struct.unpack("<QQQQ", inp.read(32))
        ix = cls.__new__(cls)
        ix.m, ix.nu, ix.n, ix.N = m, nu, n, total
        vocab, stems = [], []
        for _ in range(nu):
            (ln,) = struct.unpack("<Q", inp.read(8))
            vocab.append(inp.read(ln).decode("utf-8"))
            (ln,) = struct.unpack("<Q", inp.read(8))
            stems.append(inp.read(ln).decode("utf-8"))
        ix.vocab = vocab
        ix._stems = stems
        ix._ids = {w: t for t, w in enumerate(vocab, start=1)}
        ix.bounds = SparseBitVec.read(inp)
        ix.postings = WaveletTree.read(inp)
        ix._tf_enc = [(BitVec.read(inp), BitVec.read(inp)) for _ in range(nu)]
        return ix

    def __repr__(self) -> str:
        return f"InvIndex(m={self.m}, terms={self.nu}, n={self.n})"


class FtIterator:
    """Fingered cursor over the docid-ordered view of one term (or range).

    seek_rank(k) returns the k-th listed document (k non-decreasing across
    calls); seek_doc(d) returns the first listed (doc, rank) with doc >= d
    (d strictly increasing across calls). Once exhausted, seek_doc keeps
    returning None. The two seek families keep independent fingers, so they
    may be interleaved freely.
    """

    def __init__(self, ix: InvIndex, term: TermSpec):
        self._ix = ix
        self._lo, self._hi = ix._span(term)
        self.size = self._hi - self._lo + 1
        self._rank_finger: Optional[QuantileFinger] = None
        self._doc_finger: Optional[RnvFinger] = None
        self._last_doc = 0

    def seek_rank(self, k: int) -> int:
        if self._rank_finger is None:
            self._rank_finger = QuantileFinger(self._ix.postings, self._lo, self._hi)
        return self._rank_finger.seek(k)[0]

    def seek_doc(self, d: int) -> Optional[Tuple[int, int]]:
        if d <= self._last_doc:
            raise ValueError(f"seek_doc arguments must increase (d={d} after {self._last_doc})")
        self._last_doc = d
        if d > self._ix.m:  # probing past the last document exhausts quietly
            return None
        if self._doc_finger is None:
            self._doc_finger = RnvFinger(self._ix.postings, self._lo, self._hi)
        got = self._doc_finger.next(d)
        if got is None:
            return None
        doc, _, rank = got
        return doc, rank
