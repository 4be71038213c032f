#!/usr/bin/env python3
# Rank/select bit vectors: the substrate everything else is built on.

import random

from wtree import BitVec, SparseBitVec

# A bit vector answers three questions about a fixed bit string:
#   access(i)  - what is bit i?
#   rank1(i)   - how many 1s among positions 1..i?
#   select1(j) - where is the j-th 1?
bv = BitVec("00100010010")
print("bits        :", "00100010010")
print("access(3)   :", bv.access(3))
print("rank1(11)   :", bv.rank1(11))
print("select1(2)  :", bv.select1(2))
print("select1(4)  :", bv.select1(4), "(only 3 ones -> absent, not an error)")
print("rank0(5)    :", bv.rank0(5))

# rank and select are inverses where defined
for j in range(1, bv.total_ones + 1):
    assert bv.rank1(bv.select1(j)) == j

# The auxiliary rank samples stay far below the payload itself.
big = BitVec([random.Random(0).randint(0, 1) for _ in range(1 << 16)])
print("\npayload bits:", big.payload_bits)
print("aux bits    :", big.aux_bits, f"({100 * big.aux_bits / big.payload_bits:.1f}% overhead)")

# SparseBitVec stores a strictly increasing set of positions in a high/low
# bit split, spending about log2(universe/ones) + 2 bits per element.
positions = list(range(100, 1_000_000, 3571))
sv = SparseBitVec(positions, universe=1_000_000)
print("\nsparse ones :", sv.ones, "in universe", sv.universe)
print("select1(5)  :", sv.select1(5), "== positions[4] ==", positions[4])
print("rank1(50000):", sv.rank1(50_000))
print("bits used   :", sv.bits_used, f"({sv.bits_used / sv.ones:.1f} bits/element)")
