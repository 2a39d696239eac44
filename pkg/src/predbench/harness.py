"""Benchmark harness: reproducible workloads, phase timing, memory metering,
CSV emission, and differential verification against the sorted-array oracle.

A run has three timed phases over one generated workload: insert every drawn
key, answer every query (folding results into a checksum), then delete the
keys in insertion order (repeat draws count as operations and fail the
delete). Key and query streams come from independently seeded PCG64
generators so any iteration can be regenerated from (seed, iteration) alone.
Memory is metered with tracemalloc around the phases; when tracing cannot be
used the memory columns degrade to the string "unavailable".
"""

from __future__ import annotations

import csv
import time
import tracemalloc
from dataclasses import dataclass

import numpy as np
from numpy.random import PCG64, Generator, SeedSequence

from .btree import BTreeSet
from .core import OracleSet, PredecessorSet
from .fusion import FusionTree
from .universe_sampling import USConfig, UniverseSampling
from .yfast import YFastConfig, YFastTrie

MASK64 = (1 << 64) - 1

CSV_COLUMNS = (
    "structure", "params", "width", "n", "iteration", "seed",
    "insert_ns", "query_ns", "delete_ns",
    "insert_ops_s", "query_ops_s", "delete_ops_s",
    "peak_bytes", "bytes_after_insert", "bits_per_key",
)


@dataclass(frozen=True)
class WorkloadSpec:
    width: int
    n_keys: int
    n_queries: int
    seed: int


@dataclass
class Workload:
    keys: list[int]
    queries: list[int]


def generate_workload(spec: WorkloadSpec, iteration: int = 0) -> Workload:
    """Keys: n draws with replacement, uniform over the full width. Queries:
    q draws uniform over [min(keys), max(keys))."""
    key_ss, query_ss = SeedSequence(spec.seed + iteration).spawn(2)
    key_rng = Generator(PCG64(key_ss))
    keys = key_rng.integers(0, (1 << spec.width) - 1, size=spec.n_keys,
                            dtype=np.uint64, endpoint=True)
    lo = int(keys.min())
    hi = int(keys.max())
    if lo == hi:
        raise ValueError("workload has a single distinct key; query range is empty")
    query_rng = Generator(PCG64(query_ss))
    queries = query_rng.integers(lo, hi, size=spec.n_queries, dtype=np.uint64)
    return Workload([int(k) for k in keys], [int(q) for q in queries])


# FNV-1a over the query answers, with None mapped below every key.
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fold_checksum(chk: int, result: int | None) -> int:
    v = 0 if result is None else result + 1
    return ((chk ^ v) * _FNV_PRIME) & MASK64


def query_checksum(structure: PredecessorSet, queries: list[int]) -> int:
    chk = _FNV_OFFSET
    pred = structure.predecessor
    for q in queries:
        chk = fold_checksum(chk, pred(q))
    return chk


@dataclass
class Measurement:
    structure: str
    params: str
    width: int
    n: int
    iteration: int
    seed: int
    insert_ns: int
    query_ns: int
    delete_ns: int
    insert_ops_s: float
    query_ops_s: float
    delete_ops_s: float
    peak_bytes: int | None
    bytes_after_insert: int | None
    bits_per_key: float | None
    checksum: int      # not a CSV column; compared against the oracle in tests
    final_size: int    # not a CSV column; 0 after a full run


class _Meter:
    """tracemalloc wrapper that tolerates environments where tracing fails
    and leaves an already-running trace alone."""

    def __init__(self):
        self.enabled = False
        self._started_here = False
        self._baseline = 0

    def start(self) -> None:
        try:
            if not tracemalloc.is_tracing():
                tracemalloc.start()
                self._started_here = True
            self._baseline = tracemalloc.get_traced_memory()[0]
            tracemalloc.reset_peak()
            self.enabled = True
        except Exception:
            self.enabled = False

    def current(self) -> int | None:
        if not self.enabled:
            return None
        return max(tracemalloc.get_traced_memory()[0] - self._baseline, 0)

    def peak(self) -> int | None:
        if not self.enabled:
            return None
        return max(tracemalloc.get_traced_memory()[1] - self._baseline, 0)

    def stop(self) -> None:
        if self.enabled and self._started_here:
            tracemalloc.stop()


def run_experiment(factory, structure: str, params: str, spec: WorkloadSpec,
                   iteration: int) -> Measurement:
    workload = generate_workload(spec, iteration)
    keys = workload.keys
    queries = workload.queries

    meter = _Meter()
    meter.start()
    try:
        s = factory()

        t0 = time.perf_counter_ns()
        ins = s.insert
        for k in keys:
            ins(k)
        insert_ns = time.perf_counter_ns() - t0
        bytes_after = meter.current()

        chk = _FNV_OFFSET
        pred = s.predecessor
        t0 = time.perf_counter_ns()
        for q in queries:
            chk = ((chk ^ (0 if (r := pred(q)) is None else r + 1))
                   * _FNV_PRIME) & MASK64
        query_ns = time.perf_counter_ns() - t0

        t0 = time.perf_counter_ns()
        rem = s.delete
        for k in keys:
            rem(k)
        delete_ns = time.perf_counter_ns() - t0

        peak = meter.peak()
        final_size = len(s)
    finally:
        meter.stop()

    return Measurement(
        structure=structure,
        params=params,
        width=spec.width,
        n=spec.n_keys,
        iteration=iteration,
        seed=spec.seed,
        insert_ns=insert_ns,
        query_ns=query_ns,
        delete_ns=delete_ns,
        insert_ops_s=spec.n_keys / (insert_ns / 1e9),
        query_ops_s=spec.n_queries / (query_ns / 1e9),
        delete_ops_s=spec.n_keys / (delete_ns / 1e9),
        peak_bytes=peak,
        bytes_after_insert=bytes_after,
        bits_per_key=None if bytes_after is None else 8.0 * bytes_after / spec.n_keys,
        checksum=chk,
        final_size=final_size,
    )


def _cell(v) -> str:
    return "unavailable" if v is None else str(v)


def _csv_row(m: Measurement) -> list[str]:
    return [
        m.structure, m.params, str(m.width), str(m.n), str(m.iteration),
        str(m.seed), str(m.insert_ns), str(m.query_ns), str(m.delete_ns),
        str(m.insert_ops_s), str(m.query_ops_s), str(m.delete_ops_s),
        _cell(m.peak_bytes), _cell(m.bytes_after_insert), _cell(m.bits_per_key),
    ]


def emit_csv(measurements: list[Measurement], path: str,
             aggregate: bool = False) -> None:
    """One row per iteration; with aggregate=True, trailing rows carry the
    arithmetic means under iteration "avg", one per distinct configuration."""
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(CSV_COLUMNS)
        for m in measurements:
            out.writerow(_csv_row(m))
        if aggregate:
            groups: dict[tuple, list[Measurement]] = {}
            for m in measurements:
                key = (m.structure, m.params, m.width, m.n, m.seed)
                groups.setdefault(key, []).append(m)
            for ms in groups.values():
                out.writerow(_aggregate_row(ms))


def _aggregate_row(ms: list[Measurement]) -> list[str]:
    first = ms[0]
    k = len(ms)

    def mean(vals):
        if any(v is None for v in vals):
            return None
        return sum(vals) / k

    return [
        first.structure, first.params, str(first.width), str(first.n), "avg",
        str(first.seed),
        str(sum(m.insert_ns for m in ms) / k),
        str(sum(m.query_ns for m in ms) / k),
        str(sum(m.delete_ns for m in ms) / k),
        str(sum(m.insert_ops_s for m in ms) / k),
        str(sum(m.query_ops_s for m in ms) / k),
        str(sum(m.delete_ops_s for m in ms) / k),
        _cell(mean([m.peak_bytes for m in ms])),
        _cell(mean([m.bytes_after_insert for m in ms])),
        _cell(mean([m.bits_per_key for m in ms])),
    ]


# -- differential verification -----------------------------------------------


def generate_ops(width: int, n_ops: int, seed: int,
                 key_bits: int | None = None) -> list[tuple[str, int]]:
    """A deterministic mixed stream. Deletes and queries prefer values that
    were inserted earlier so they exercise occupied parts of the universe.
    key_bits caps the draw range below the structure width; soak tests use it
    to keep eagerly allocated bucket storage dense instead of enormous."""
    span = width if key_bits is None else min(key_bits, width)
    rng = Generator(PCG64(SeedSequence(seed)))
    kinds = rng.random(n_ops)
    reuse = rng.random(n_ops)
    fresh = rng.integers(0, (1 << span) - 1, size=n_ops, dtype=np.uint64,
                         endpoint=True)
    picks = rng.integers(0, 1 << 62, size=n_ops, dtype=np.uint64)
    ops: list[tuple[str, int]] = []
    pool: list[int] = []
    for i in range(n_ops):
        x = int(fresh[i])
        if kinds[i] < 0.45:
            ops.append(("insert", x))
            pool.append(x)
        elif kinds[i] < 0.75:
            if pool and reuse[i] < 0.7:
                x = pool[int(picks[i]) % len(pool)]
            ops.append(("delete", x))
        else:
            if pool and reuse[i] < 0.5:
                x = pool[int(picks[i]) % len(pool)]
            ops.append(("predecessor", x))
    return ops


@dataclass
class Divergence:
    index: int
    op: str
    value: int
    expected: object
    got: object
    minimized_length: int


def _first_divergence(factory, width: int, ops) -> tuple | None:
    s = factory()
    o = OracleSet(width)
    for i, (op, val) in enumerate(ops):
        if op == "insert":
            got, want = s.insert(val), o.insert(val)
        elif op == "delete":
            got, want = s.delete(val), o.delete(val)
        else:
            got, want = s.predecessor(val), o.predecessor(val)
        if got != want:
            return i, op, val, want, got
    return None


def _shrink(factory, width: int, prefix: list) -> list:
    """Greedy removal of operations while some divergence survives."""
    cur = list(prefix)
    # Coarse passes with shrinking chunks, then a per-op pass.
    chunk = max(len(cur) // 2, 1)
    while chunk >= 1:
        i = 0
        while i < len(cur):
            cand = cur[:i] + cur[i + chunk:]
            if cand and _first_divergence(factory, width, cand) is not None:
                cur = cand
            else:
                i += chunk
        if chunk == 1:
            break
        chunk //= 2
    return cur


def verify_structure(factory, width: int, n_ops: int, seed: int,
                     key_bits: int | None = None) -> Divergence | None:
    """Replay a generated stream against the oracle; on divergence, shrink
    the failing prefix and report. None means the structure agreed."""
    ops = generate_ops(width, n_ops, seed, key_bits)
    hit = _first_divergence(factory, width, ops)
    if hit is None:
        return None
    index, op, val, want, got = hit
    minimized = _shrink(factory, width, ops[:index + 1])
    return Divergence(index, op, val, want, got, len(minimized))


# -- structure registry --------------------------------------------------------

STRUCTURES = (
    "us-array", "us-hash", "yfast-ul", "yfast-sl",
    "fusion", "fusion-wide", "btree-ls", "btree-bs", "oracle",
)

_US_DEFAULT_KB = {"bitvector": 24, "list": 10, "hybrid": 16}
_US_BUCKET_NAMES = {"bv": "bitvector", "ul": "list", "hybrid": "hybrid"}


def _parse_value(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse_params(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise ValueError(f"parameter {pair!r} is not of the form key=value")
        out[key] = _parse_value(value)
    return out


def _params_str(d: dict) -> str:
    return ";".join(f"{k}={d[k]}" for k in sorted(d))


def make_structure(structure: str, width: int, params: dict):
    """Resolve a structure name and parameters to (factory, params string).
    The string reflects the effective configuration, defaults included."""
    p = dict(params)

    def done():
        if p:
            raise ValueError(f"unknown parameters for {structure}: {sorted(p)}")

    if structure == "oracle":
        done()
        return (lambda: OracleSet(width)), ""

    if structure in ("us-array", "us-hash"):
        if width >= 64:
            raise ValueError("universe sampling does not support 64-bit keys")
        top = "array" if structure == "us-array" else "hash"
        bucket = p.pop("bucket", "hybrid")
        if bucket not in _US_BUCKET_NAMES:
            raise ValueError(f"bucket must be one of {sorted(_US_BUCKET_NAMES)}")
        kind = _US_BUCKET_NAMES[bucket]
        kb = p.pop("kb", _US_DEFAULT_KB[kind])
        eff = {"bucket": bucket, "kb": kb}
        if kind == "hybrid":
            eff["theta_min"] = p.pop("theta_min", 1 << 9)
            eff["theta_max"] = p.pop("theta_max", 1 << 10)
            cfg = USConfig(k_b=kb, top_kind=top, bucket_kind=kind,
                           theta_min=eff["theta_min"], theta_max=eff["theta_max"])
        else:
            cfg = USConfig(k_b=kb, top_kind=top, bucket_kind=kind)
        done()
        return (lambda: UniverseSampling(width, cfg)), _params_str(eff)

    if structure in ("yfast-sl", "yfast-ul"):
        mode = "sorted" if structure == "yfast-sl" else "unsorted"
        eff = {"t": p.pop("t", 256), "c": p.pop("c", 2),
               "gamma": p.pop("gamma", 0.25)}
        cfg = YFastConfig(t=eff["t"], c=eff["c"], gamma=eff["gamma"], mode=mode)
        done()
        return (lambda: YFastTrie(width, cfg)), _params_str(eff)

    if structure in ("fusion", "fusion-wide"):
        k = 8 if structure == "fusion" else 16
        eff = {"k": k, "rank": p.pop("rank", "packed")}
        if eff["rank"] not in ("packed", "linear"):
            raise ValueError("rank must be 'packed' or 'linear'")
        done()
        rank = eff["rank"]
        return (lambda: FusionTree(width, k=k, rank_backend=rank)), _params_str(eff)

    if structure in ("btree-ls", "btree-bs"):
        search = "linear" if structure == "btree-ls" else "binary"
        eff = {"B": p.pop("B", 64)}
        done()
        cap = eff["B"]
        return (lambda: BTreeSet(width, B=cap, node_search=search)), _params_str(eff)

    raise ValueError(f"unknown structure {structure!r}")
