import io
import math
import random

import pytest

from wtree.wavelet import WaveletTree, ceil_log2

from oracles import seq_count, seq_rank, seq_report, seq_select

# abracadabra with letters a..r mapped to 1..5
LETTERS = {"a": 1, "b": 2, "c": 3, "d": 4, "r": 5}
ABRA = [LETTERS[ch] for ch in "abracadabra"]


def letters(codes):
    rev = {v: k for k, v in LETTERS.items()}
    return "".join(rev[c] for c in codes)


def random_seq(rng, n, sigma, skew=False):
    if skew:
        weights = [1.0 / (i**1.3) for i in range(1, sigma + 1)]
        return rng.choices(range(1, sigma + 1), weights=weights, k=n)
    return [rng.randint(1, sigma) for _ in range(n)]


def test_abracadabra_shape():
    wt = WaveletTree(ABRA, sigma=5)
    root = wt.root()
    assert wt.node_bits(root) == "00100010010"
    left, right = wt.children(root)
    assert letters(wt.node_sequence(left)) == "abacaaba"
    assert letters(wt.node_sequence(right)) == "rdr"
    assert letters(wt.node_sequence(root)) == "abracadabra"


def test_access_examples():
    wt = WaveletTree(ABRA, sigma=5)
    assert wt.access(5) == LETTERS["c"]
    assert wt.access(11) == LETTERS["a"]
    assert WaveletTree([7], sigma=9).access(1) == 7


def test_rank_examples():
    wt = WaveletTree(ABRA, sigma=5)
    assert wt.rank(LETTERS["a"], 8) == seq_rank(ABRA, LETTERS["a"], 8) == 4
    assert wt.rank(LETTERS["a"], 0) == 0
    assert wt.rank(LETTERS["d"], 11) == seq_rank(ABRA, LETTERS["d"], 11) == 1


def test_select_examples():
    wt = WaveletTree(ABRA, sigma=5)
    assert wt.select(LETTERS["r"], 2) == seq_select(ABRA, LETTERS["r"], 2) == 10
    assert wt.select(LETTERS["a"], 1) == seq_select(ABRA, LETTERS["a"], 1) == 1
    assert wt.select(LETTERS["c"], 2) is None


def test_count_examples():
    wt = WaveletTree(ABRA, sigma=5)
    assert wt.count(1, 11, LETTERS["b"], LETTERS["d"]) == 4
    assert wt.count(5, 4, 1, 5) == 0
    assert wt.count(2, 5, LETTERS["a"], LETTERS["a"]) == 1


def test_report_examples():
    wt = WaveletTree(ABRA, sigma=5)
    assert list(wt.report(1, 4, 1, 5)) == [(1, 2), (2, 1), (5, 1)]
    assert list(wt.report(3, 2, 1, 5)) == []
    assert list(wt.report(1, 11, 5, 5)) == [(5, 2)]


def test_constant_sequence_stores_no_bits():
    wt = WaveletTree([4] * 17, sigma=9)
    assert wt.height == 0
    assert wt.bitmap_bits == 0
    assert wt.access(9) == 4
    assert wt.rank(4, 17) == 17
    assert wt.rank(3, 17) == 0
    assert wt.select(4, 17) == 17
    assert wt.count(1, 17, 1, 9) == 17
    assert list(wt.report(1, 17, 1, 9)) == [(4, 17)]


def test_build_validation():
    with pytest.raises(ValueError):
        WaveletTree([], sigma=4)
    with pytest.raises(ValueError):
        WaveletTree([0, 1], sigma=4)
    with pytest.raises(ValueError):
        WaveletTree([1, 5], sigma=4)
    wt = WaveletTree([1, 2], sigma=2)
    with pytest.raises(ValueError):
        wt.access(3)
    with pytest.raises(ValueError):
        wt.rank(1, 3)
    with pytest.raises(ValueError):
        wt.rank(9, 1)
    with pytest.raises(ValueError):
        wt.select(1, 0)


@pytest.mark.parametrize("sigma,skew,seed", [
    (2, False, 11),
    (5, False, 12),
    (64, True, 13),
    (1000, False, 14),
    (1000, True, 15),
])
def test_random_roundtrip_and_rank_select(sigma, skew, seed):
    rng = random.Random(seed)
    n = rng.randint(200, 1200)
    seq = random_seq(rng, n, sigma, skew)
    wt = WaveletTree(seq, sigma)
    for i in range(1, n + 1):
        assert wt.access(i) == seq[i - 1]
    for _ in range(150):
        c = rng.randint(1, sigma)
        i = rng.randint(0, n)
        assert wt.rank(c, i) == seq_rank(seq, c, i)
        j = rng.randint(1, max(1, seq.count(c)))
        assert wt.select(c, j) == seq_select(seq, c, j)
        assert wt.select(c, seq.count(c) + 1) is None


@pytest.mark.parametrize("sigma,seed", [(5, 21), (64, 22), (1000, 23)])
def test_random_count_report(sigma, seed):
    rng = random.Random(seed)
    n = rng.randint(100, 800)
    seq = random_seq(rng, n, sigma, skew=(seed % 2 == 0))
    wt = WaveletTree(seq, sigma)
    for _ in range(120):
        xs = rng.randint(1, n)
        xe = rng.randint(xs, n)
        ys = rng.randint(1, sigma)
        ye = rng.randint(ys, sigma)
        assert wt.count(xs, xe, ys, ye) == seq_count(seq, xs, xe, ys, ye)
        got = list(wt.report(xs, xe, ys, ye))
        assert got == seq_report(seq, xs, xe, ys, ye)
        # frequencies must equal rank differences
        for sym, f in got:
            assert f == wt.rank(sym, xe) - wt.rank(sym, xs - 1)
        syms = [s for s, _ in got]
        assert syms == sorted(set(syms))
        assert sum(f for _, f in got) == wt.count(xs, xe, ys, ye)


def test_rank_select_inverse_properties():
    rng = random.Random(31)
    seq = random_seq(rng, 500, 40)
    wt = WaveletTree(seq, 40)
    for _ in range(300):
        c = rng.randint(1, 40)
        i = rng.randint(1, 500)
        r = wt.rank(c, i)
        if r >= 1:
            assert wt.select(c, r) <= i
        j = rng.randint(1, max(1, seq.count(c)))
        p = wt.select(c, j)
        if p is not None:
            assert wt.rank(c, p) == j


def test_count_visit_envelope():
    rng = random.Random(41)
    for sigma in (5, 64, 1000):
        n = 2048
        seq = random_seq(rng, n, sigma)
        wt = WaveletTree(seq, sigma)
        for _ in range(100):
            xs = rng.randint(1, n)
            xe = rng.randint(xs, n)
            ys = rng.randint(1, sigma)
            ye = rng.randint(ys, sigma)
            wt.stats.reset()
            wt.count(xs, xe, ys, ye)
            budget = 4 * (ceil_log2(wt.distinct) + 1) + 2 * math.ceil(
                math.log2(ye - ys + 1) if ye > ys else 1
            )
            assert wt.stats.node_visits <= budget


def test_space_bound():
    rng = random.Random(51)
    for sigma in (2, 17, 64, 500, 1000):
        n = rng.randint(50, 2000)
        seq = random_seq(rng, n, sigma)
        wt = WaveletTree(seq, sigma)
        u = len(set(seq))
        assert wt.distinct == u
        assert wt.bitmap_bits <= n * ceil_log2(u)
        assert wt.bitmap_bits == n * wt.height


def test_space_bound_sparse_pocket():
    # u barely above sigma/2 but below the next power of two: the remap must
    # still keep total bits within n*ceil(log2 u).
    rng = random.Random(52)
    sigma = 1000
    symbols = rng.sample(range(1, sigma + 1), 513)
    seq = symbols + [rng.choice(symbols) for _ in range(2000)]
    wt = WaveletTree(seq, sigma)
    assert wt.distinct == 513
    assert wt.bitmap_bits <= len(seq) * ceil_log2(513)
    for i in (1, 100, len(seq)):
        assert wt.access(i) == seq[i - 1]


def test_sparse_alphabet_remap():
    seq = [10, 500_000, 10, 999_999, 77]
    wt = WaveletTree(seq, sigma=1_000_000)
    assert wt.alpha_map is not None
    assert [wt.access(i) for i in range(1, 6)] == seq
    assert wt.rank(500_000, 5) == 1
    assert wt.rank(11, 5) == 0  # absent symbol
    assert wt.select(999_999, 1) == 4
    assert wt.count(1, 5, 11, 999_998) == 2
    assert list(wt.report(1, 5, 1, 1_000_000)) == [
        (10, 2),
        (77, 1),
        (500_000, 1),
        (999_999, 1),
    ]


def test_serialization_roundtrip():
    rng = random.Random(61)
    for sigma in (5, 1000, 100_000):
        n = 300
        if sigma > 1000:
            seq = [rng.randint(1, sigma) for _ in range(n)]
        else:
            seq = random_seq(rng, n, sigma)
        wt = WaveletTree(seq, sigma)
        buf = io.BytesIO()
        wt.write(buf)
        buf.seek(0)
        back = WaveletTree.read(buf)
        assert back.n == wt.n and back.sigma == wt.sigma
        assert back.distinct == wt.distinct and back.height == wt.height
        for i in range(1, n + 1):
            assert back.access(i) == seq[i - 1]
        for _ in range(50):
            c = rng.randint(1, sigma)
            i = rng.randint(0, n)
            assert back.rank(c, i) == wt.rank(c, i)
        assert list(back.report(1, n, 1, sigma)) == list(wt.report(1, n, 1, sigma))


def test_balanced_split_everywhere():
    rng = random.Random(71)
    for sigma in (5, 40, 1000):
        seq = random_seq(rng, 400, sigma)
        wt = WaveletTree(seq, sigma)
        stack = [wt.root()]
        while stack:
            node = stack.pop()
            if wt.is_leaf(node):
                continue
            left, right = wt.children(node)
            lsize = left.b - left.a + 1
            rsize = right.b - right.a + 1
            assert abs(lsize - rsize) <= 1
            stack += [left, right]


def test_stats_do_not_change_results():
    wt = WaveletTree(ABRA, sigma=5)
    res1 = list(wt.report(1, 11, 1, 5))
    wt.stats.reset()
    res2 = list(wt.report(1, 11, 1, 5))
    assert res1 == res2
    assert wt.stats.node_visits > 0
