"""Workload generation, experiment phases, CSV schema, and verify mode."""

import csv

import pytest

from predbench.cli import main
from predbench.core import OracleSet
from predbench.harness import (
    CSV_COLUMNS, WorkloadSpec, emit_csv, generate_ops, generate_workload,
    make_structure, parse_params, query_checksum, run_experiment,
    verify_structure,
)

SPEC = WorkloadSpec(width=32, n_keys=4000, n_queries=1500, seed=42)


def test_workload_is_deterministic_per_iteration():
    a = generate_workload(SPEC, 1)
    b = generate_workload(SPEC, 1)
    c = generate_workload(SPEC, 2)
    assert a.keys == b.keys and a.queries == b.queries
    assert a.keys != c.keys and a.queries != c.queries
    assert len(a.keys) == SPEC.n_keys and len(a.queries) == SPEC.n_queries


def test_workload_ranges():
    wl = generate_workload(SPEC, 1)
    assert all(0 <= k < (1 << 32) for k in wl.keys)
    lo, hi = min(wl.keys), max(wl.keys)
    assert all(lo <= q < hi for q in wl.queries)
    wide = generate_workload(WorkloadSpec(64, 2000, 100, 7), 1)
    assert max(wide.keys) > 1 << 62  # the top of the 64-bit range is reachable


def test_degenerate_workload_is_rejected():
    with pytest.raises(ValueError):
        generate_workload(WorkloadSpec(width=1, n_keys=1, n_queries=5, seed=0), 1)


def test_experiment_checksum_and_drain():
    factory, params = make_structure("btree-ls", 32, {"B": 16})
    m = run_experiment(factory, "btree-ls", params, SPEC, 1)
    assert m.final_size == 0
    wl = generate_workload(SPEC, 1)
    oracle = OracleSet(32)
    for k in wl.keys:
        oracle.insert(k)
    assert m.checksum == query_checksum(oracle, wl.queries)
    assert m.insert_ns > 0 and m.query_ns > 0 and m.delete_ns > 0
    assert m.insert_ops_s > 0 and m.bits_per_key > 0


def test_csv_schema_and_aggregate_row(tmp_path):
    spec = WorkloadSpec(width=32, n_keys=500, n_queries=200, seed=1)
    ms = []
    for sid in ("oracle", "btree-ls"):
        factory, params = make_structure(sid, 32, {})
        ms += [run_experiment(factory, sid, params, spec, i) for i in (1, 2)]
    path = tmp_path / "out.csv"
    emit_csv(ms, path, aggregate=True)
    rows = list(csv.reader(open(path)))
    assert rows[0] == list(CSV_COLUMNS)
    assert len(rows) == 7  # 4 iteration rows, then one avg row per structure
    body = [dict(zip(rows[0], r)) for r in rows[1:]]
    assert [(r["structure"], r["iteration"]) for r in body] == [
        ("oracle", "1"), ("oracle", "2"), ("btree-ls", "1"), ("btree-ls", "2"),
        ("oracle", "avg"), ("btree-ls", "avg")]
    for r in body:
        assert (r["width"], r["n"], r["seed"]) == ("32", "500", "1")
        assert r["params"] == ("" if r["structure"] == "oracle" else "B=64")
        assert float(r["insert_ops_s"]) > 0
        if r["peak_bytes"] != "unavailable":
            assert int(float(r["peak_bytes"])) >= 0
            assert float(r["bits_per_key"]) >= 0
    for avg, first, second in ((body[4], body[0], body[1]),
                               (body[5], body[2], body[3])):
        assert float(avg["insert_ns"]) == pytest.approx(
            (float(first["insert_ns"]) + float(second["insert_ns"])) / 2)


def test_registry_params_and_errors():
    assert parse_params(["t=64", "gamma=0.5", "bucket=bv"]) == {
        "t": 64, "gamma": 0.5, "bucket": "bv"}
    with pytest.raises(ValueError):
        parse_params(["nonsense"])
    _, p = make_structure("yfast-sl", 32, {"t": 64})
    assert p == "c=2;gamma=0.25;t=64"
    _, p = make_structure("us-hash", 32, {"bucket": "bv"})
    assert p == "bucket=bv;kb=24"
    _, p = make_structure("us-array", 32, {})
    assert p == "bucket=hybrid;kb=16;theta_max=1024;theta_min=512"
    _, p = make_structure("fusion-wide", 64, {})
    assert p == "k=16;rank=packed"
    with pytest.raises(ValueError):
        make_structure("btree-ls", 32, {"order": 4})
    with pytest.raises(ValueError):
        make_structure("fusion", 32, {"rank": "quadratic"})
    with pytest.raises(ValueError):
        make_structure("skiplist", 32, {})
    with pytest.raises(ValueError):
        make_structure("us-array", 64, {})  # no 64-bit sampled universes


def test_verify_accepts_correct_structures():
    ops = generate_ops(32, 1000, 3)
    assert ops == generate_ops(32, 1000, 3)
    assert any(o[0] == "delete" for o in ops)
    factory, _ = make_structure("fusion", 32, {})
    assert verify_structure(factory, 32, 5000, 3) is None


def test_verify_catches_and_shrinks_a_mutant():
    class Mutant:
        def __init__(self):
            self.inner = OracleSet(32)
            self.calls = 0

        def insert(self, x):
            return self.inner.insert(x)

        def delete(self, x):
            return self.inner.delete(x)

        def predecessor(self, x):
            self.calls += 1
            r = self.inner.predecessor(x)
            if self.calls > 40 and r is not None:
                return r + 1
            return r

        def __len__(self):
            return len(self.inner)

    d = verify_structure(Mutant, 32, 10_000, 7)
    assert d is not None
    assert d.op == "predecessor" and d.got == d.expected + 1
    assert 0 < d.minimized_length <= d.index + 1


def test_cli_run_and_verify(tmp_path, capsys):
    out = tmp_path / "cli.csv"
    rc = main(["run", "--structure", "yfast-sl", "--width", "32",
               "--keys", "3000", "--queries", "1000", "--iterations", "2",
               "--seed", "9", "--param", "t=64", "--out", str(out),
               "--aggregate"])
    assert rc == 0
    rows = list(csv.reader(open(out)))
    assert rows[0] == list(CSV_COLUMNS) and len(rows) == 4
    assert rows[1][1] == "c=2;gamma=0.25;t=64"

    rc = main(["verify", "--structure", "btree-bs", "--width", "40",
               "--ops", "8000", "--seed", "2"])
    assert rc == 0
    assert "verify ok" in capsys.readouterr().out

    rc = main(["run", "--structure", "us-array", "--width", "64",
               "--keys", "10", "--queries", "10", "--iterations", "1",
               "--seed", "0", "--out", str(tmp_path / "no.csv")])
    assert rc == 2
    assert "64-bit" in capsys.readouterr().err


def test_cli_reports_divergences(monkeypatch, capsys):
    import predbench.cli as cli
    from predbench.harness import Divergence

    planted = Divergence(index=151, op="predecessor", value=42,
                         expected=41, got=43, minimized_length=7)
    monkeypatch.setattr(cli, "verify_structure", lambda *a, **k: planted)
    rc = cli.main(["verify", "--structure", "oracle", "--width", "32",
                   "--ops", "10", "--seed", "9"])
    out = capsys.readouterr().out
    assert rc == 1
    assert "divergence at op 151" in out
    assert "seed 9" in out
    assert "minimized prefix length 7" in out
