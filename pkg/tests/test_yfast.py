"""Y-fast trie: construction walkthrough, full trie-rebuild audits, and
oracle differentials in both bucket modes."""

import random

import pytest

from predbench.core import OracleSet
from predbench.yfast import Bucket, LSSNode, YFastConfig, YFastTrie


def audit(tr):
    """Recompute the entire trie from the bucket list and compare every
    stored level, flag, descendant link, counter, and cut against it."""
    w = tr.width
    buckets = tr.bucket_list()
    assert tr.head.rep is None and not tr.head.rep_dead
    reps = [b.rep for b in buckets]
    assert reps == sorted(set(reps))
    prev = tr.head
    for b in buckets:
        assert b.prev is prev and prev.next is b
        prev = b
    assert prev.next is None
    if buckets:
        assert all(k < buckets[0].rep for k in tr.head.keys)
    for i, b in enumerate(buckets):
        hi = buckets[i + 1].rep if i + 1 < len(buckets) else 1 << w
        assert b.keys, f"empty real bucket rep={b.rep}"
        assert all(b.rep <= k < hi for k in b.keys)
        assert b.rep_dead == (b.rep not in b.keys)
        assert len(b.keys) <= tr._split_at
        if tr._sorted:
            assert b.keys == sorted(b.keys)
        assert len(set(b.keys)) == len(b.keys)
    assert len(tr) == len(tr.head.keys) + sum(len(b.keys) for b in buckets)

    m = len(buckets)
    assert tr.reps == m
    if m <= 1:
        expect_bot = 0
    else:
        expect_bot = max(w - (reps[i] ^ reps[i + 1]).bit_length()
                         for i in range(m - 1)) + 1
    assert tr.l_bot == expect_bot
    assert len(tr.levels) == expect_bot == len(tr.branching)
    for ell in range(expect_bot):
        groups = {}
        for b in buckets:
            groups.setdefault(b.rep >> (w - ell), []).append(b)
        assert set(tr.levels[ell]) == set(groups)
        nbranch = 0
        for p, grp in groups.items():
            node = tr.levels[ell][p]
            assert node.desc_min is grp[0] and node.desc_max is grp[-1]
            kids = {(b.rep >> (w - 1 - ell)) & 1 for b in grp}
            assert node.has_left == (0 in kids)
            assert node.has_right == (1 in kids)
            nbranch += len(kids) == 2
        assert tr.branching[ell] == nbranch
    if m == 0:
        expect_top = 0
    else:
        expect_top = 0
        while expect_top < w:
            nxt = expect_top + 1
            if len({r >> (w - nxt) for r in reps}) != 1 << nxt:
                break
            expect_top = nxt
    assert tr.l_top == expect_top


WALKTHROUGH_OPS = [("i", 0), ("i", 3), ("i", 17), ("i", 18), ("i", 19),
                   ("d", 17), ("i", 20), ("i", 21), ("i", 23), ("d", 20),
                   ("i", 17), ("i", 6), ("d", 0), ("i", 7), ("i", 9)]


def _walkthrough_trie(mode):
    tr = YFastTrie(5, YFastConfig(t=2, c=2, gamma=1.0, mode=mode))
    for op, x in WALKTHROUGH_OPS:
        assert (tr.insert(x) if op == "i" else tr.delete(x))
        audit(tr)
    return tr


@pytest.mark.parametrize("mode", ["sorted", "unsorted"])
def test_construction_walkthrough(mode):
    tr = _walkthrough_trie(mode)
    bl = tr.bucket_list()
    assert [(b.rep, b.rep_dead, sorted(b.keys)) for b in bl] == [
        (0, True, [3, 6, 7, 9]),
        (17, False, [17, 18, 19]),
        (20, True, [21, 23]),
    ]
    assert tr.head.keys == []
    assert (tr.l_top, tr.l_bot) == (1, 3)
    assert sorted(tr) == [3, 6, 7, 9, 17, 18, 19, 21, 23]


@pytest.mark.parametrize("mode", ["sorted", "unsorted"])
def test_lookup_descends_through_dead_and_live_reps(mode):
    tr = _walkthrough_trie(mode)
    b1, b2, b3 = tr.bucket_list()
    # 20 sits on the dead representative of the last bucket
    assert tr._locate_bucket(20) is b3
    # 10 falls in a trie gap and resolves to the first bucket
    assert tr._locate_bucket(10) is b1
    # 2 is above rep 0, so it lands in the first bucket even though every
    # key there exceeds it; the prev link supplies the (absent) answer
    assert tr._locate_bucket(2) is b1
    assert tr._locate_bucket(31) is b3
    assert tr.predecessor(22) == 21
    assert tr.predecessor(20) == 19  # dead rep: answer comes from the left
    assert tr.predecessor(2) is None
    assert tr.predecessor(3) == 3
    assert tr.predecessor(16) == 9


def test_split_pins_upper_half_representative():
    tr = YFastTrie(5, YFastConfig(t=2, c=2, gamma=1.0, mode="sorted"))
    for x in (3, 6, 7, 8, 9):
        tr.insert(x)
    low, high = tr.bucket_list()[-2:]
    assert low.keys == [3, 6]
    assert (high.rep, high.keys) == (7, [7, 8, 9])
    audit(tr)


def test_config_validation():
    for bad in (dict(t=3), dict(t=0), dict(c=1), dict(gamma=0.0),
                dict(gamma=1.5), dict(mode="heap")):
        with pytest.raises(ValueError):
            YFastConfig(**bad)
    YFastConfig(t=2, c=2, gamma=1.0)  # the walkthrough configuration
    YFastConfig(t=512)


def test_head_bucket_absorbs_low_keys_and_splits():
    tr = YFastTrie(8, YFastConfig(t=2, c=2, gamma=1.0, mode="sorted"))
    tr.insert(200)          # first key founds a real bucket
    for x in (10, 30, 20, 40):
        tr.insert(x)        # all below the only rep: into the head bucket
        audit(tr)
    assert tr.head.keys == [10, 20, 30, 40]
    tr.insert(25)           # head overflows, upper half founds rep 25
    audit(tr)
    assert tr.head.keys == [10, 20]
    reps = [b.rep for b in tr.bucket_list()]
    assert reps == [25, 200]
    assert tr.predecessor(24) == 20
    assert tr.predecessor(26) == 25
    # drain everything; the last merge dissolves into the head bucket
    for x in (200, 25, 30, 40, 10, 20):
        assert tr.delete(x)
        audit(tr)
    assert len(tr) == 0 and tr.reps == 0 and tr.head.keys == []


@pytest.mark.parametrize("mode", ["sorted", "unsorted"])
@pytest.mark.parametrize("t,gamma,width", [(2, 1.0, 8), (4, 0.25, 12),
                                           (8, 0.5, 10)])
def test_differential_with_full_audits(mode, t, gamma, width):
    cfg = YFastConfig(t=t, c=2, gamma=gamma, mode=mode)
    tr = YFastTrie(width, cfg)
    oracle = OracleSet(width)
    rng = random.Random(t * 100 + width + (mode == "sorted"))
    for step in range(4000):
        x = rng.randrange(1 << width)
        r = rng.random()
        if r < 0.45:
            assert tr.insert(x) == oracle.insert(x), step
        elif r < 0.8:
            assert tr.delete(x) == oracle.delete(x), step
        else:
            assert tr.predecessor(x) == oracle.predecessor(x), step
        audit(tr)
    assert sorted(tr) == list(oracle)
    for x in list(oracle):
        assert tr.delete(x)
        audit(tr)
    assert len(tr) == 0 and tr.reps == 0


@pytest.mark.parametrize("mode", ["sorted", "unsorted"])
def test_differential_benchmark_widths(mode):
    rng = random.Random(11 + (mode == "sorted"))
    for width in (32, 40, 64):
        tr = YFastTrie(width, YFastConfig(t=64, mode=mode))
        oracle = OracleSet(width)
        for _ in range(12_000):
            x = rng.getrandbits(width)
            r = rng.random()
            if r < 0.5:
                assert tr.insert(x) == oracle.insert(x)
            elif r < 0.7:
                y = rng.choice(oracle._keys) if len(oracle) else x
                assert tr.delete(y) == oracle.delete(y)
            else:
                assert tr.predecessor(x) == oracle.predecessor(x)
        audit(tr)
        assert sorted(tr) == list(oracle)
