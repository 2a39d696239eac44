"""Dynamic fusion nodes: frozen example, compressed-trie oracle, and
incremental-state-equals-rebuild checks."""

import random
from bisect import bisect_right

import pytest

from predbench.core import OracleSet
from predbench.fusion import FusionNode, FusionTree


def _pext_ref(x, m):
    out = 0
    j = 0
    for i in range(64):
        if m >> i & 1:
            if x >> i & 1:
                out |= 1 << j
            j += 1
    return out


def reference_rows(keys):
    """Branch and free rows straight from the compressed-trie definition:
    the mask collects every level where adjacent keys diverge, a key's
    don't-care run covers the mask levels below its lowest divergence from
    a physical neighbour, and the branch row is the masked compression with
    the don't-care bits forced to zero."""
    n = len(keys)
    mask = 0
    for a, b in zip(keys, keys[1:]):
        mask |= 1 << ((a ^ b).bit_length() - 1)
    rows = []
    for i, k in enumerate(keys):
        lows = []
        if i > 0:
            lows.append((k ^ keys[i - 1]).bit_length() - 1)
        if i + 1 < n:
            lows.append((k ^ keys[i + 1]).bit_length() - 1)
        if lows:
            t = bin(mask & ((1 << min(lows)) - 1)).count("1")
        else:
            t = 0  # singleton: no divergences, no mask, nothing to pad
        free = (1 << t) - 1
        rows.append(((_pext_ref(k, mask) & ~free), free))
    return mask, rows


def _rank_oracle(keys, x):
    return bisect_right(keys, x)


def _distinct(rng, width, n):
    out = set()
    while len(out) < n:
        out.add(rng.getrandbits(width))
    return sorted(out)


def test_worked_example_five_bits():
    node = FusionNode(k=8, width=5)
    node.rebuild([2, 3, 12, 27])
    assert node.mask == 0b11001
    assert node.rows() == [(0b000, 0b000), (0b001, 0b000),
                           (0b010, 0b001), (0b100, 0b011)]
    assert node.match(25) == 4
    assert node.match(4) == 1
    assert node.match(0b00111) == 2
    assert node.match(0b11000) == 4
    assert node.predecessor_rank(25) == 3
    assert node.predecessor(25) == 12
    assert node.predecessor_rank(4) == 2
    assert node.predecessor(4) == 3
    assert node.predecessor(1) is None
    assert 12 in node and 13 not in node

    assert node.delete(12)
    assert node.mask == 0b10001
    assert node.rows() == [(0b00, 0b00), (0b01, 0b00), (0b10, 0b01)]
    fresh = FusionNode(k=8, width=5)
    fresh.rebuild([2, 3, 27])
    assert node.state() == fresh.state()


def test_rebuild_matches_reference_rows():
    rng = random.Random(0xF0)
    for k, width in ((8, 5), (8, 32), (8, 64), (16, 40), (16, 64)):
        node = FusionNode(k=k, width=width)
        for _ in range(300):
            n = rng.randrange(1, k + 1)
            keys = _distinct(rng, min(width, 24), n)
            node.rebuild(keys)
            mask, rows = reference_rows(keys)
            assert node.mask == mask
            assert node.rows() == rows


def test_rebuild_input_validation():
    node = FusionNode(k=8, width=32)
    with pytest.raises(ValueError):
        node.rebuild([3, 3])
    with pytest.raises(ValueError):
        node.rebuild([2, 1])
    with pytest.raises(ValueError):
        node.rebuild(list(range(9)))
    with pytest.raises(ValueError):
        FusionNode(k=12)
    node.rebuild(list(range(8)))
    with pytest.raises(ValueError):
        node.insert(100)


def test_deletion_repacks_neighbour_dont_cares():
    # Removing an endpoint or an inner key must leave exactly the state a
    # rebuild produces, including neighbours whose free runs lengthen.
    for doomed in (0, 4, 24, 26):
        node = FusionNode(k=8, width=5)
        node.rebuild([0, 4, 24, 26])
        fresh = FusionNode(k=8, width=5)
        fresh.rebuild([x for x in (0, 4, 24, 26) if x != doomed])
        assert node.delete(doomed)
        assert node.state() == fresh.state(), doomed
        assert not node.delete(doomed)


def test_exhaustive_small_universe():
    import itertools
    universe = range(16)
    for n in (1, 2, 3):
        for keys in itertools.combinations(universe, n):
            node = FusionNode(k=8, width=4)
            node.rebuild(list(keys))
            for q in universe:
                want = _rank_oracle(keys, q)
                assert node.predecessor_rank(q) == want, (keys, q)


def test_incremental_updates_equal_rebuild():
    rng = random.Random(0x51)
    for k, width in ((8, 32), (8, 64), (16, 40), (16, 64)):
        node = FusionNode(k=k, width=width)
        present = []
        for step in range(1500):
            if len(present) < k and (not present or rng.random() < 0.55):
                x = rng.getrandbits(width)
                if x in present:
                    continue
                node.insert(x)
                present.append(x)
                present.sort()
            else:
                x = present.pop(rng.randrange(len(present)))
                node.delete(x)
            fresh = FusionNode(k=k, width=width)
            fresh.rebuild(present)
            assert node.state() == fresh.state(), (k, width, step)


def test_wide_and_narrow_nodes_agree():
    rng = random.Random(83)
    for _ in range(200):
        keys = _distinct(rng, 64, rng.randrange(1, 9))
        a = FusionNode(k=8, width=64)
        b = FusionNode(k=16, width=64)
        a.rebuild(keys)
        b.rebuild(keys)
        for _ in range(40):
            q = rng.getrandbits(64)
            assert a.predecessor_rank(q) == b.predecessor_rank(q) == _rank_oracle(keys, q)


def test_rank_backends_agree():
    rng = random.Random(17)
    for k in (8, 16):
        packed = FusionNode(k=k, width=64, rank_backend="packed")
        linear = FusionNode(k=k, width=64, rank_backend="linear")
        for _ in range(120):
            keys = _distinct(rng, 64, rng.randrange(1, k + 1))
            packed.rebuild(keys)
            linear.rebuild(keys)
            for _ in range(25):
                q = rng.getrandbits(64)
                assert packed.match(q) == linear.match(q)
                assert packed.predecessor_rank(q) == linear.predecessor_rank(q)


def test_divergence_bracketing_is_an_identity():
    # Forcing the bits below the divergence can bracket the cut one level
    # higher or lower; with the divergence bit of x fixed by the branch
    # taken, both conventions hand the same navigation query to match.
    rng = random.Random(5)
    for _ in range(50_000):
        x = rng.getrandbits(64)
        p = rng.randrange(64)
        low_incl = (1 << (p + 1)) - 1
        low_excl = (1 << p) - 1
        if x >> p & 1:
            assert x | low_incl == x | low_excl
        else:
            assert x & ~low_incl == x & ~low_excl


def test_fusion_tree_differential():
    rng = random.Random(0xFA57)
    tree = FusionTree(width=40, k=8)
    oracle = OracleSet(40)
    for _ in range(6000):
        x = rng.getrandbits(40)
        r = rng.random()
        if r < 0.5:
            assert tree.insert(x) == oracle.insert(x)
        elif r < 0.7:
            y = rng.choice(oracle._keys) if len(oracle) else x
            assert tree.delete(y) == oracle.delete(y)
        else:
            assert tree.predecessor(x) == oracle.predecessor(x)
    for x in list(oracle):
        assert tree.delete(x)
    assert len(tree) == 0
