"""Range queries on a wavelet tree beyond rank/select.

* ``rqq``   -- k-th smallest value of S[i..j], with its frequency there.
* ``mrqq``  -- all distinct values at sorted positions k..k' of S[i..j].
* ``rnv``   -- smallest value >= x in S[i..j], with frequency and rank.
* ``rint``  -- values common to k position ranges, threshold-relaxed.
* fingered variants of rqq and rnv that resume from the previous query's
  root-to-leaf path instead of restarting at the root.

All positions are 1-based, value arguments are original symbols in
[1, sigma]. Absent results are returned as None, never raised.
``alternation`` measures the adaptive difficulty of an intersection
instance; it scans the raw sequence and exists to calibrate and test the
instrumented node-visit counts of ``rint``.
"""

from __future__ import annotations

from typing import Iterator, List, Optional, Sequence, Tuple

from .wavelet import Node, WaveletTree

_INF = float("inf")


def _check_interval(wt: WaveletTree, i: int, j: int) -> None:
    if i < 1 or j > wt.n:
        raise ValueError(f"interval [{i}, {j}] out of range [1, {wt.n}]")


# --- range quantile ----------------------------------------------------------


def rqq(wt: WaveletTree, i: int, j: int, k: int) -> Tuple[int, int]:
    """k-th smallest value of the multiset S[i..j] and its frequency there."""
    _check_interval(wt, i, j)
    if i > j:
        raise ValueError("rqq requires a non-empty interval")
    if not 1 <= k <= j - i + 1:
        raise ValueError(f"k={k} out of range [1, {j - i + 1}]")
    visits = wt.stats
    node, qi, qj = wt.root(), i, j
    while node.a != node.b:
        visits.node_visits += 1
        left, lqi, lqj, right, rqi, rqj = wt.split(node, qi, qj)
        n_l = lqj - lqi + 1
        if k <= n_l:
            node, qi, qj = left, lqi, lqj
        else:
            k -= n_l
            node, qi, qj = right, rqi, rqj
    visits.node_visits += 1
    return wt.symbol_of(node.a), qj - qi + 1


def mrqq(
    wt: WaveletTree, i: int, j: int, k: int, k2: int
) -> Iterator[Tuple[int, int]]:
    """Distinct values at sorted positions k..k2 of S[i..j], increasing,
    each with its frequency clipped to that window."""
    _check_interval(wt, i, j)
    if i > j:
        raise ValueError("mrqq requires a non-empty interval")
    if not 1 <= k <= k2 <= j - i + 1:
        raise ValueError(f"window [{k}, {k2}] out of range [1, {j - i + 1}]")
    yield from _mrqq(wt, wt.root(), i, j, k, k2)


def _mrqq(
    wt: WaveletTree, node: Node, qi: int, qj: int, k: int, k2: int
) -> Iterator[Tuple[int, int]]:
    wt.stats.node_visits += 1
    if node.a == node.b:
        yield wt.symbol_of(node.a), k2 - k + 1
        return
    left, lqi, lqj, right, rqi, rqj = wt.split(node, qi, qj)
    n_l = lqj - lqi + 1
    if k <= n_l:
        yield from _mrqq(wt, left, lqi, lqj, k, min(n_l, k2))
    if k2 > n_l:
        yield from _mrqq(wt, right, rqi, rqj, max(k - n_l, 1), k2 - n_l)


class QuantileFinger:
    """Repeated rqq over a frozen interval with non-decreasing k.

    Saves, per depth, the node cursor, the count of values skipped to the
    left, and the largest k that still shares the path prefix; a later seek
    replays only the suffix of the path that actually changes.
    """

    def __init__(self, wt: WaveletTree, i: int, j: int):
        _check_interval(wt, i, j)
        if i > j:
            raise ValueError("finger interval must be non-empty")
        self._wt = wt
        self.i, self.j = i, j
        self._path: List[Tuple[Node, int, int, int]] = []  # node, qi, qj, e
        self._m: List[float] = []  # max k sharing the prefix through depth d
        self._last_k = 0

    def seek(self, k: int) -> Tuple[int, int]:
        """Equivalent to rqq(wt, i, j, k); k must not decrease across calls."""
        if k < self._last_k:
            raise ValueError(f"finger seeks must not decrease (k={k} after {self._last_k})")
        if not 1 <= k <= self.j - self.i + 1:
            raise ValueError(f"k={k} out of range [1, {self.j - self.i + 1}]")
        self._last_k = k
        if not self._path:
            self._path = [(self._wt.root(), self.i, self.j, 0)]
        else:
            d = len(self._path) - 1
            while d > 0 and k > self._m[d - 1]:
                d -= 1
            del self._path[d + 1 :]
            del self._m[d:]
        return self._descend(k)

    def _descend(self, k: int) -> Tuple[int, int]:
        wt = self._wt
        visits = wt.stats
        node, qi, qj, e = self._path[-1]
        while node.a != node.b:
            visits.node_visits += 1
            left, lqi, lqj, right, rqi, rqj = wt.split(node, qi, qj)
            n_l = lqj - lqi + 1
            if k - e <= n_l:
                self._m.append(e + n_l)
                entry = (left, lqi, lqj, e)
            else:
                self._m.append(self._m[-1] if self._m else _INF)
                entry = (right, rqi, rqj, e + n_l)
            self._path.append(entry)
            node, qi, qj, e = entry
        visits.node_visits += 1
        return wt.symbol_of(node.a), qj - qi + 1


def rqq_fingered(finger: QuantileFinger, k: int) -> Tuple[int, int]:
    return finger.seek(k)


# --- range next value ---------------------------------------------------------


def rnv(
    wt: WaveletTree, i: int, j: int, x: int
) -> Optional[Tuple[int, int, int]]:
    """Smallest value >= x in S[i..j] with its frequency and smallest rank
    in the sorted multiset; None when no such value exists."""
    if i < 1 or j > wt.n:
        raise ValueError(f"interval [{i}, {j}] out of range [1, {wt.n}]")
    if not 1 <= x <= wt.sigma + 1:
        raise ValueError(f"threshold {x} out of range [1, {wt.sigma + 1}]")
    if i > j:
        return None
    cx = wt.code_floor(x)
    if cx >= wt.leafspan:
        return None
    path = [(wt.root(), i, j, 0)]
    res = _rnv_run(wt, path, [], cx)
    if res is None:
        return None
    code, f, p = res
    return wt.symbol_of(code), f, p


def _rnv_run(
    wt: WaveletTree,
    path: List[Tuple[Node, int, int, int]],
    dirs: List[int],
    x_code: Optional[int],
) -> Optional[Tuple[int, int, int]]:
    """Run the next-value descent from path[-1], extending path/dirs.

    dirs[d] records the direction (0 left, 1 right) taken from path[d].
    A dead branch backtracks to the deepest left turn and resumes on its
    right sibling in minimum mode (x_code None).
    """
    visits = wt.stats
    while True:
        node, qi, qj, p = path[-1]
        visits.node_visits += 1
        if qi > qj:
            d = len(path) - 2
            while d >= 0 and dirs[d] != 0:
                d -= 1
            if d < 0:
                return None
            del path[d + 1 :]
            del dirs[d:]
            node, qi, qj, p = path[d]
            _, lqi, lqj, right, rqi, rqj = wt.split(node, qi, qj)
            dirs.append(1)
            path.append((right, rqi, rqj, p + (lqj - lqi + 1)))
            x_code = None  # anything in the right sibling exceeds x
            continue
        if node.a == node.b:
            return node.a, qj - qi + 1, p + 1
        left, lqi, lqj, right, rqi, rqj = wt.split(node, qi, qj)
        mid = node.a + (node.b - node.a) // 2
        if x_code is not None and x_code > mid:
            dirs.append(1)
            path.append((right, rqi, rqj, p + (lqj - lqi + 1)))
        else:
            dirs.append(0)
            path.append((left, lqi, lqj, p))


class RnvFinger:
    """Repeated rnv over a frozen interval with strictly increasing x.

    Remembers the root-to-leaf path of the previous call; the next call
    climbs to the deepest saved node whose label range still contains the
    new threshold and resumes the descent from there.
    """

    def __init__(self, wt: WaveletTree, i: int, j: int):
        if i < 1 or j > wt.n:
            raise ValueError(f"interval [{i}, {j}] out of range [1, {wt.n}]")
        self._wt = wt
        self.i, self.j = i, j
        self._path: List[Tuple[Node, int, int, int]] = []
        self._dirs: List[int] = []
        self._last_x: Optional[int] = None
        self._exhausted = False

    def next(self, x: int) -> Optional[Tuple[int, int, int]]:
        """Equivalent to rnv(wt, i, j, x); x must strictly increase."""
        wt = self._wt
        if not 1 <= x <= wt.sigma + 1:
            raise ValueError(f"threshold {x} out of range [1, {wt.sigma + 1}]")
        if self._last_x is not None and x <= self._last_x:
            raise ValueError(f"finger thresholds must increase (x={x} after {self._last_x})")
        self._last_x = x
        if self._exhausted:
            return None
        cx = wt.code_floor(x)
        if cx >= wt.leafspan:
            self._exhausted = True
            return None
        if not self._path:
            if self.i > self.j:
                self._exhausted = True
                return None
            self._path = [(wt.root(), self.i, self.j, 0)]
            self._dirs = []
        else:
            d = len(self._path) - 1
            while d > 0 and not (self._path[d][0].a <= cx <= self._path[d][0].b):
                d -= 1
            del self._path[d + 1 :]
            del self._dirs[d:]
        res = _rnv_run(wt, self._path, self._dirs, cx)
        if res is None:
            self._exhausted = True
            return None
        code, f, p = res
        return wt.symbol_of(code), f, p


def rnv_fingered(finger: RnvFinger, x: int) -> Optional[Tuple[int, int, int]]:
    return finger.next(x)


# --- range intersection ----------------------------------------------------------


def rint(
    wt: WaveletTree,
    ranges: Sequence[Tuple[int, int]],
    t: Optional[int] = None,
    rng: Optional[Tuple[int, int]] = None,
) -> Iterator[Tuple[int, Tuple[int, ...]]]:
    """Symbols present in at least t of the given position ranges.

    Yields (symbol, per-range frequencies) in increasing symbol order;
    frequency slots stay aligned with the input ranges (0 where absent).
    Empty input ranges are carried, not dropped, so they count against the
    threshold like any other empty range. Default t is len(ranges), the
    plain intersection; t=1 is the union.
    """
    k = len(ranges)
    if k < 1:
        raise ValueError("rint needs at least one range")
    if t is None:
        t = k
    if not 1 <= t <= k:
        raise ValueError(f"threshold {t} out of range [1, {k}]")
    norm = []
    for i, j in ranges:
        if i < 1 or j > wt.n:
            raise ValueError(f"range [{i}, {j}] out of range [1, {wt.n}]")
        norm.append((i, j) if i <= j else (1, 0))
    ys, ye = rng if rng is not None else (1, wt.sigma)
    ya, yb = wt.code_range(ys, ye)
    if ya > yb:
        return
    yield from _rint(wt, wt.root(), norm, k - t, ya, yb)


def _rint(
    wt: WaveletTree,
    node: Node,
    rs: List[Tuple[int, int]],
    slack: int,
    ya: int,
    yb: int,
) -> Iterator[Tuple[int, Tuple[int, ...]]]:
    wt.stats.node_visits += 1
    if sum(1 for qi, qj in rs if qi > qj) > slack:
        return
    if node.b < ya or yb < node.a:
        return
    if node.a == node.b:
        yield wt.symbol_of(node.a), tuple(max(0, qj - qi + 1) for qi, qj in rs)
        return
    lv = wt.levels[node.depth]
    r1 = lv.rank1
    lo = node.lo
    ones_lo = r1(lo - 1)
    zeros_lo = lo - 1 - ones_lo
    kz = (node.hi - r1(node.hi)) - zeros_lo
    mid = node.a + (node.b - node.a) // 2
    left = Node(node.depth + 1, lo, lo + kz - 1, node.a, mid)
    right = Node(node.depth + 1, lo + kz, node.hi, mid + 1, node.b)
    left_rs, right_rs = [], []
    for qi, qj in rs:
        z_qi = (qi - 1 - r1(qi - 1)) - zeros_lo
        z_qj = (qj - r1(qj)) - zeros_lo
        left_rs.append((lo + z_qi, lo + z_qj - 1))
        right_rs.append((lo + kz + (qi - lo - z_qi), lo + kz + (qj - lo + 1 - z_qj) - 1))
    yield from _rint(wt, left, left_rs, slack, ya, yb)
    yield from _rint(wt, right, right_rs, slack, ya, yb)


def rint_via_rnv(
    wt: WaveletTree, r1: Tuple[int, int], r2: Tuple[int, int]
) -> Iterator[int]:
    """Two-range intersection by alternating fingered next-value probes.

    Produces the same symbol set as rint(wt, [r1, r2]); kept as an
    independently testable second route.
    """
    f1 = RnvFinger(wt, *r1)
    f2 = RnvFinger(wt, *r2)
    x1 = f1.next(1)
    if x1 is None:
        return
    x2 = f2.next(x1[0])
    while x1 is not None and x2 is not None:
        if x1[0] == x2[0]:
            yield x1[0]
            if x1[0] + 1 > wt.sigma + 1:
                return
            x1 = f1.next(x1[0] + 1)
            if x1 is None:
                return
            x2 = f2.next(x1[0])
        elif x1[0] < x2[0]:
            x1 = f1.next(x2[0])
        else:
            x2 = f2.next(x1[0])


# --- alternation measure -----------------------------------------------------------


def alternation(
    seq: Sequence[int], ranges: Sequence[Tuple[int, int]], sigma: int
) -> int:
    """Adaptive difficulty of intersecting the given ranges of ``seq``.

    Built on a coverage function C over [1, sigma]: C[c] is 0 when c occurs
    in every range and otherwise names some range missing c. The measure is
    the number of forced zeros plus the minimal number of adjacent switches
    over all valid choices of C, found by dynamic programming (every
    minimizer yields the same value).
    """
    k = len(ranges)
    present = [set(seq[i - 1 : j]) for i, j in ranges]
    zeros = 0
    best: Optional[dict] = None
    for c in range(1, sigma + 1):
        missing = [r + 1 for r in range(k) if c not in present[r]]
        if not missing:
            zeros += 1
            choices = [0]
        else:
            choices = missing
        if best is None:
            best = {v: 0 for v in choices}
            continue
        prev_min = min(best.values())
        best = {
            v: min(best.get(v, prev_min + 1), prev_min + 1) for v in choices
        }
    return zeros + (min(best.values()) if best else 0)
