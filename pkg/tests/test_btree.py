"""B-tree baseline: structural audits and oracle differentials."""

import random

import pytest

from predbench.btree import SUPPORTED_DEGREES, BTreeSet
from predbench.core import OracleSet


def test_degree_and_search_validation():
    with pytest.raises(ValueError):
        BTreeSet(32, B=12)
    with pytest.raises(ValueError):
        BTreeSet(32, B=64, node_search="interpolating")
    for b in SUPPORTED_DEGREES:
        BTreeSet(32, B=b)


def test_sequential_fill_and_drain():
    t = BTreeSet(32, B=8, node_search="linear")
    n = 5000
    for x in range(n):
        assert t.insert(x)
        assert not t.insert(x)
    assert t._engine.audit() == list(range(n))
    assert t.predecessor(n + 100) == n - 1
    assert t.predecessor(0) == 0
    for x in reversed(range(n)):
        assert t.delete(x)
        assert not t.delete(x)
    assert len(t) == 0
    assert t.predecessor(123) is None


@pytest.mark.parametrize("b", SUPPORTED_DEGREES)
@pytest.mark.parametrize("search", ["linear", "binary"])
def test_differential_with_audits(b, search):
    rng = random.Random(b * 1000 + (search == "binary"))
    width = rng.choice([32, 40, 64])
    t = BTreeSet(width, B=b, node_search=search)
    oracle = OracleSet(width)
    span = 1 << min(width, 18)
    for step in range(6000):
        x = rng.randrange(span)
        r = rng.random()
        if r < 0.5:
            assert t.insert(x) == oracle.insert(x)
        elif r < 0.75:
            assert t.delete(x) == oracle.delete(x)
        else:
            assert t.predecessor(x) == oracle.predecessor(x)
        if step % 1021 == 0:
            assert t._engine.audit() == list(oracle)
    assert t._engine.audit() == list(oracle)
    for x in list(oracle):
        assert t.delete(x)
    assert len(t) == 0


def test_linear_and_binary_search_agree():
    rng = random.Random(99)
    a = BTreeSet(64, B=16, node_search="linear")
    b = BTreeSet(64, B=16, node_search="binary")
    keys = [rng.getrandbits(64) for _ in range(20_000)]
    for k in keys:
        assert a.insert(k) == b.insert(k)
    for _ in range(20_000):
        q = rng.getrandbits(64)
        assert a.predecessor(q) == b.predecessor(q)
    for k in keys:
        assert a.delete(k) == b.delete(k)
    assert len(a) == len(b) == 0
