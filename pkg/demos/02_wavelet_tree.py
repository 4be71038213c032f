#!/usr/bin/env python3
# The wavelet tree: one structure that *replaces* a sequence and answers
# access, rank, select, and positional range count/report over it.

from wtree import WaveletTree

# Work over "abracadabra" with letters a..r coded 1..5.
letters = {"a": 1, "b": 2, "c": 3, "d": 4, "r": 5}
rev = {v: k for k, v in letters.items()}
seq = [letters[ch] for ch in "abracadabra"]
wt = WaveletTree(seq, sigma=5)

# The root bitmap sends {a,b,c} left (0) and {d,r} right (1); each subtree
# recursively handles its own subsequence.
root = wt.root()
left, right = wt.children(root)
print("root bitmap :", wt.node_bits(root))
print("left handles:", "".join(rev[s] for s in wt.node_sequence(left)))
print("right       :", "".join(rev[s] for s in wt.node_sequence(right)))

# The tree stands in for the sequence itself...
print("\naccess(5)   :", rev[wt.access(5)])
print("rank(a, 8)  :", wt.rank(letters["a"], 8), "   # a's in the first 8 chars")
print("select(r, 2):", wt.select(letters["r"], 2), "  # position of the 2nd r")

# ...and also answers two-dimensional range queries: how many positions in
# [xs, xe] hold a symbol inside [ys, ye]? Which symbols, how often?
print("\ncount([1,11] x [b,d])  :", wt.count(1, 11, letters["b"], letters["d"]))
print("report([1,4] x [a,r])  :", [(rev[s], f) for s, f in wt.report(1, 4, 1, 5)])

# Space: the bitmaps total exactly n * ceil(log2 u) bits.
print("\nn, distinct, height    :", wt.n, wt.distinct, wt.height)
print("stored bitmap bits     :", wt.bitmap_bits, "=", wt.n, "x", wt.height)
print("rank/select aux bits   :", wt.aux_bits)
