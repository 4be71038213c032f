"""Plain and sparse bit vectors with rank/select support.

BitVec packs bits into 64-bit words and keeps absolute popcount samples at
fixed block boundaries, giving near-constant rank and logarithmic select.
SparseBitVec stores a strictly increasing set of positions in a high/low
bit-split (Elias-Fano) layout, answering select1 in near-constant time while
spending roughly log2(universe/ones) + 2 bits per element.

Positions are 1-based in the public API: rank1(i) counts set bits among
positions 1..i, select1(j) returns the position of the j-th set bit.
Both structures are immutable after construction and safe for concurrent
readers.
"""

from __future__ import annotations

import struct
from bisect import bisect_left
from typing import BinaryIO, Iterable, Optional, Sequence, Union

import numpy as np

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M3 = np.uint64(0x0F0F0F0F0F0F0F0F)
_M4 = np.uint64(0x0101010101010101)

# Words per rank block: 4 words = 256 bits, sampled with an absolute
# counter (32 bits below 2^32 positions: 12.5% overhead, well within the
# 50%-of-payload budget). Counters widen to 64 bits in the serialized form.
_BLOCK_WORDS = 4
_BLOCK_BITS = _BLOCK_WORDS * 64

BitsInput = Union[str, bytes, Sequence[int], np.ndarray]


def _popcount64(words: np.ndarray) -> np.ndarray:
    a = words - ((words >> np.uint64(1)) & _M1)
    a = (a & _M2) + ((a >> np.uint64(2)) & _M2)
    a = (a + (a >> np.uint64(4))) & _M3
    return (a * _M4) >> np.uint64(56)


def _pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a 0/1 array into little-endian uint64 words."""
    if bits.size == 0:
        return np.zeros(0, dtype="<u8")
    packed = np.packbits(bits.astype(np.uint8), bitorder="little")
    pad = (-packed.size) % 8
    if pad:
        packed = np.concatenate([packed, np.zeros(pad, dtype=np.uint8)])
    return np.ascontiguousarray(packed).view("<u8")


def _coerce_bits(bits: BitsInput) -> np.ndarray:
    if isinstance(bits, str):
        arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
        if arr.size and arr.max() > 1:
            raise ValueError("bit string must contain only '0' and '1'")
        return arr
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.size and arr.max() > 1:
        raise ValueError("bits must be 0 or 1")
    return arr


class BitVec:
    """Immutable bit vector with rank/select, 1-based positions."""

    __slots__ = ("n", "total_ones", "_npwords", "_words", "_block_rank")

    def __init__(self, bits: BitsInput = ()):  # noqa: D107
        arr = _coerce_bits(bits)
        self.n = int(arr.size)
        self._npwords = _pack_bits(arr)
        self._finish()

    @classmethod
    def _from_words(cls, n: int, words: np.ndarray) -> "BitVec":
        bv = cls.__new__(cls)
        bv.n = n
        bv._npwords = np.ascontiguousarray(words, dtype="<u8")
        bv._finish()
        return bv

    def _finish(self) -> None:
        expect = (self.n + 63) // 64
        if self._npwords.size != expect:
            raise ValueError("word payload does not match declared length")
        if self.n % 64:
            # Padding bits beyond n must be zero; rank/select rely on it.
            tail = int(self._npwords[-1]) if expect else 0
            if tail >> (self.n % 64):
                raise ValueError("padding bits beyond length must be zero")
        self._words = self._npwords.tolist()
        pops = _popcount64(self._npwords)
        cum = np.concatenate([[0], np.cumsum(pops, dtype=np.int64)])
        # One counter per block actually addressable by rank (block of
        # position i is i >> 8, so n >> 8 is the largest index needed).
        self._block_rank = cum[::_BLOCK_WORDS][: (self.n >> 8) + 1].tolist()
        self.total_ones = int(cum[-1])

    # --- queries ----------------------------------------------------------

    def __len__(self) -> int:
        return self.n

    def access(self, i: int) -> int:
        """Bit at position i, 1 <= i <= n."""
        if not 1 <= i <= self.n:
            raise ValueError(f"position {i} out of range [1, {self.n}]")
        i -= 1
        return (self._words[i >> 6] >> (i & 63)) & 1

    def rank1(self, i: int) -> int:
        """Number of 1 bits among positions 1..i; rank1(0) == 0."""
        if not 0 <= i <= self.n:
            raise ValueError(f"rank index {i} out of range [0, {self.n}]")
        w, r = divmod(i, 64)
        c = self._block_rank[w >> 2]
        ws = self._words
        for t in range((w >> 2) << 2, w):
            c += ws[t].bit_count()
        if r:
            c += (ws[w] & ((1 << r) - 1)).bit_count()
        return c

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def select1(self, j: int) -> Optional[int]:
        """Position of the j-th 1 bit, or None when j is out of range."""
        if j < 1 or j > self.total_ones:
            return None
        b = bisect_left(self._block_rank, j) - 1
        c = self._block_rank[b]
        t = b << 2
        ws = self._words
        while True:
            pc = ws[t].bit_count()
            if c + pc >= j:
                break
            c += pc
            t += 1
        word = ws[t]
        for _ in range(j - c - 1):
            word &= word - 1
        return (t << 6) + (word & -word).bit_length()

    def select0(self, j: int) -> Optional[int]:
        """Position of the j-th 0 bit, or None when j is out of range."""
        if j < 1 or j > self.n - self.total_ones:
            return None
        # Binary search blocks on derived zero counts (phantom padding bits
        # beyond n are excluded by clamping to n).
        br = self._block_rank
        lo, hi = 0, len(br) - 1
        while lo < hi:  # largest block with zeros-before < j
            mid = (lo + hi + 1) >> 1
            if min(mid * _BLOCK_BITS, self.n) - br[mid] < j:
                lo = mid
            else:
                hi = mid - 1
        c = min(lo * _BLOCK_BITS, self.n) - br[lo]
        t = lo << 2
        ws = self._words
        while True:
            avail = min(64, self.n - (t << 6))
            zc = avail - ws[t].bit_count()
            if c + zc >= j:
                break
            c += zc
            t += 1
        word = ~ws[t] & ((1 << min(64, self.n - (t << 6))) - 1)
        for _ in range(j - c - 1):
            word &= word - 1
        return (t << 6) + (word & -word).bit_length()

    def to_bits01(self) -> np.ndarray:
        """The stored bits as a 0/1 uint8 array of length n."""
        if self.n == 0:
            return np.zeros(0, dtype=np.uint8)
        raw = self._npwords.view(np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.n]

    # --- space accounting -------------------------------------------------

    @property
    def payload_bits(self) -> int:
        return self.n

    @property
    def aux_bits(self) -> int:
        width = 64 if self.n >= (1 << 32) else 32
        return width * len(self._block_rank)

    # --- serialization ----------------------------------------------------

    def write(self, out: BinaryIO, store_aux: bool = True) -> None:
        """Length, flags (bit 0: samples stored), raw words, samples."""
        out.write(struct.pack("<QQ", self.n, 1 if store_aux else 0))
        out.write(self._npwords.tobytes())
        if store_aux:
            out.write(np.asarray(self._block_rank, dtype="<u8").tobytes())

    @classmethod
    def read(cls, inp: BinaryIO) -> "BitVec":
        n, flags = struct.unpack("<QQ", inp.read(16))
        nwords = (n + 63) // 64
        words = np.frombuffer(inp.read(8 * nwords), dtype="<u8")
        bv = cls._from_words(n, words)
        if flags & 1:
            nblocks = (n >> 8) + 1
            stored = np.frombuffer(inp.read(8 * nblocks), dtype="<u8")
            bv._block_rank = stored.astype(np.int64).tolist()
        return bv

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitVec)
            and self.n == other.n
            and self._words == other._words
        )

    def __repr__(self) -> str:
        return f"BitVec(n={self.n}, ones={self.total_ones})"


def _pack_fixed(values: Iterable[int], width: int, count: int) -> np.ndarray:
    """Pack `count` fixed-width values into little-endian uint64 words."""
    if width == 0 or count == 0:
        return np.zeros(0, dtype="<u8")
    nwords = (count * width + 63) // 64
    words = [0] * nwords
    bitpos = 0
    for v in values:
        w, off = divmod(bitpos, 64)
        words[w] |= (v << off) & 0xFFFFFFFFFFFFFFFF
        if off + width > 64:
            words[w + 1] |= v >> (64 - off)
        bitpos += width
    return np.asarray(words, dtype="<u8")


class SparseBitVec:
    """Set of strictly increasing positions in [1, universe], Elias-Fano coded.

    select1 runs in near-constant time; rank1 binary-searches over select1.
    An out-of-range select1 returns None so callers can probe past the end.
    """

    __slots__ = ("universe", "ones", "lowbits", "_low", "_lowlist", "_high")

    def __init__(self, positions: Union[Sequence[int], np.ndarray], universe: int):
        pos = np.asarray(positions, dtype=np.int64)
        self.universe = int(universe)
        self.ones = int(pos.size)
        if self.universe < 0:
            raise ValueError("universe must be non-negative")
        if self.ones:
            if pos[0] < 1 or pos[-1] > self.universe:
                raise ValueError("positions must lie in [1, universe]")
            if self.ones > 1 and not (np.diff(pos) > 0).all():
                raise ValueError("positions must be strictly increasing")
        self.lowbits = 0
        if self.ones and self.universe > self.ones:
            self.lowbits = max(0, (self.universe // self.ones).bit_length() - 1)
        vals = pos - 1  # 0-based values
        mask = (1 << self.lowbits) - 1
        self._low = _pack_fixed((int(v) & mask for v in vals), self.lowbits, self.ones)
        self._lowlist = (vals & mask).tolist() if self.ones else []
        if self.ones:
            high_vals = vals >> self.lowbits
            hbits = np.zeros(self.ones + int(high_vals[-1]) + 1, dtype=np.uint8)
            hbits[high_vals + np.arange(self.ones)] = 1
            self._high = BitVec(hbits)
        else:
            self._high = BitVec()

    def select1(self, j: int) -> Optional[int]:
        """Position of the j-th element (1-based), or None past the end."""
        if j < 1 or j > self.ones:
            return None
        p = self._high.select1(j)
        bucket = p - j  # zeros before the j-th one
        return (bucket << self.lowbits | self._lowlist[j - 1]) + 1

    def rank1(self, i: int) -> int:
        """Number of stored positions <= i, 0 <= i <= universe."""
        if not 0 <= i <= self.universe:
            raise ValueError(f"rank index {i} out of range [0, {self.universe}]")
        lo, hi = 0, self.ones
        while lo < hi:  # largest j with select1(j) <= i
            mid = (lo + hi + 1) >> 1
            if self.select1(mid) <= i:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def __len__(self) -> int:
        return self.universe

    @property
    def bits_used(self) -> int:
        """Logical size: packed low bits plus the unary high bitmap."""
        return (
            self.ones * self.lowbits
            + self._high.payload_bits
            + self._high.aux_bits
        )

    def write(self, out: BinaryIO) -> None:
        out.write(struct.pack("<QQQ", self.universe, self.ones, self.lowbits))
        out.write(self._low.tobytes())
        self._high.write(out)

    @classmethod
    def read(cls, inp: BinaryIO) -> "SparseBitVec":
        universe, ones, lowbits = struct.unpack("<QQQ", inp.read(24))
        nwords = (ones * lowbits + 63) // 64
        low = np.frombuffer(inp.read(8 * nwords), dtype="<u8")
        high = BitVec.read(inp)
        sv = cls.__new__(cls)
        sv.universe = universe
        sv.ones = ones
        sv.lowbits = lowbits
        sv._low = low
        sv._high = high
        sv._lowlist = [_read_fixed(low, lowbits, j) for j in range(ones)]
        return sv

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SparseBitVec)
            and self.universe == other.universe
            and self.ones == other.ones
            and self._lowlist == other._lowlist
            and self._high == other._high
        )

    def __repr__(self) -> str:
        return f"SparseBitVec(universe={self.universe}, ones={self.ones})"


def _read_fixed(words: np.ndarray, width: int, j: int) -> int:
    if width == 0:
        return 0
    bitpos = j * width
    w, off = divmod(bitpos, 64)
    v = int(words[w]) >> off
    if off + width > 64:
        v |= int(words[w + 1]) << (64 - off)
    return v & ((1 << width) - 1)
