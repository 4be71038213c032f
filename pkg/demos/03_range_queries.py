#!/usr/bin/env python3
# Order statistics and intersections on sequence ranges, straight off the
# wavelet tree: range quantile, range next value, adaptive intersection,
# and the fingered variants that reuse the previous query's path.

import random

from wtree import WaveletTree
from wtree.rangeops import (
    QuantileFinger,
    RnvFinger,
    alternation,
    mrqq,
    rint,
    rint_via_rnv,
    rnv,
    rqq,
)

rng = random.Random(7)
sigma = 1000
seq = [rng.randint(1, sigma) for _ in range(4096)]
wt = WaveletTree(seq, sigma)

# rqq: the k-th smallest value of S[i..j], no sorting, no extra structure.
i, j = 1000, 3000
print("median of S[1000..3000]      :", rqq(wt, i, j, (j - i + 1) // 2))
print("minimum / maximum            :", rqq(wt, i, j, 1), rqq(wt, i, j, j - i + 1))

# mrqq extracts a whole window of sorted positions at once.
print("sorted positions 5..9        :", list(mrqq(wt, i, j, 5, 9)))

# rnv: successor within a range -> (value, frequency, rank among sorted).
print("first value >= 990 in range  :", rnv(wt, i, j, 990))

# Fingered variants answer monotone query sequences without restarting at
# the root; results are identical to fresh queries.
fq = QuantileFinger(wt, i, j)
print("fingered quantile sweep      :", [fq.seek(k)[0] for k in (1, 2, 400, 401, 2001)])
fn = RnvFinger(wt, i, j)
walk = []
x = 1
for _ in range(5):
    got = fn.next(x)
    if got is None:
        break
    walk.append(got[0])
    x = got[0] + 1
print("fingered successor walk      :", walk)

# rint intersects the *values* of several ranges, adaptively: the node
# visits scale with the alternation difficulty alpha of the instance, not
# with the range lengths.
r1, r2 = (1, 2048), (2049, 4096)
wt.stats.reset()
common = [s for s, _ in rint(wt, [r1, r2])]
alpha = alternation(seq, [r1, r2], sigma)
print("\nhard instance (random halves): |result| =", len(common))
print("  alpha =", alpha, " node visits =", wt.stats.node_visits)

# An easy instance of the same size: the halves use disjoint value ranges,
# so the recursion dies immediately below the root.
easy = [rng.randint(1, 500) for _ in range(2048)] + [
    rng.randint(501, 1000) for _ in range(2048)
]
easy_wt = WaveletTree(easy, sigma)
easy_wt.stats.reset()
assert list(rint(easy_wt, [r1, r2])) == []
print("easy instance (disjoint values): alpha =", alternation(easy, [r1, r2], sigma),
      " node visits =", easy_wt.stats.node_visits)

# The same result set arrives via alternating fingered successor probes.
assert list(rint_via_rnv(wt, r1, r2)) == common

# Thresholded form: symbols present in at least t of k ranges.
thirds = [(1, 1365), (1366, 2730), (2731, 4096)]
at_least_2 = list(rint(wt, thirds, t=2))
print("values in >= 2 of 3 thirds   :", len(at_least_2))
