"""The shared set contract and the sorted-array oracle."""

import random

import pytest

from predbench.core import OracleSet, PredecessorSet, check_width


def test_check_width_bounds():
    assert check_width(1) == 1
    assert check_width(5) == 5
    assert check_width(64) == 64
    for bad in (0, -3, 65, 128):
        with pytest.raises(ValueError):
            check_width(bad)


def test_key_range_is_enforced():
    s = OracleSet(5)
    with pytest.raises(ValueError):
        s.insert(32)
    with pytest.raises(ValueError):
        s.predecessor(-1)
    with pytest.raises(ValueError):
        s.delete(1 << 20)
    assert s.insert(31)
    assert s.predecessor(31) == 31


def test_base_class_requires_overrides():
    base = PredecessorSet()
    base.width = 8
    for call in (lambda: base.insert(1), lambda: base.delete(1),
                 lambda: base.predecessor(1), lambda: len(base)):
        with pytest.raises(NotImplementedError):
            call()


def test_oracle_against_naive_set():
    rng = random.Random(41)
    oracle = OracleSet(16)
    naive = set()
    for _ in range(20_000):
        x = rng.randrange(1 << 16)
        r = rng.random()
        if r < 0.45:
            assert oracle.insert(x) == (x not in naive)
            naive.add(x)
        elif r < 0.75:
            assert oracle.delete(x) == (x in naive)
            naive.discard(x)
        else:
            want = max((v for v in naive if v <= x), default=None)
            assert oracle.predecessor(x) == want
        assert len(oracle) == len(naive)
        assert (x in oracle) == (x in naive)
    assert list(oracle) == sorted(naive)
    if naive:
        assert oracle.min() == min(naive)
        assert oracle.max() == max(naive)
