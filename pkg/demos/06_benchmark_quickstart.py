"""
Benchmarking and differential verification
==========================================

The harness behind the `predbench` command is an ordinary library. This
script runs a small three-phase experiment (insert everything, query a
million... well, a few thousand times, delete everything), writes the CSV,
and then lets the verifier catch a deliberately broken structure.
"""

import csv
import tempfile
from pathlib import Path

from predbench.core import OracleSet
from predbench.harness import (
    WorkloadSpec, emit_csv, make_structure, run_experiment, verify_structure,
)

spec = WorkloadSpec(width=32, n_keys=20_000, n_queries=10_000, seed=4)

# Equivalent command line:
#   predbench run --structure yfast-sl --width 32 --keys 20000 \
#       --queries 10000 --iterations 2 --seed 4 --out yfast.csv --aggregate
rows = []
for sid in ("yfast-sl", "btree-bs"):
    factory, params = make_structure(sid, spec.width, {})
    for iteration in (1, 2):
        rows.append(run_experiment(factory, sid, params, spec, iteration))

out = Path(tempfile.mkdtemp()) / "quickstart.csv"
emit_csv(rows, out, aggregate=True)

with open(out) as fh:
    table = list(csv.DictReader(fh))
print(f"{'structure':10s} {'iter':>4s} {'insert/s':>10s} {'query/s':>10s} "
      f"{'bits/key':>9s}")
for r in table:
    print(f"{r['structure']:10s} {r['iteration']:>4s} "
          f"{float(r['insert_ops_s']):>10.0f} {float(r['query_ops_s']):>10.0f} "
          f"{r['bits_per_key']:>9s}")

# The verify mode replays a mixed random op stream against a sorted-array
# oracle. A correct structure sails through; a subtly wrong one is caught
# and the failing prefix is shrunk to something you can read.


class OffByOne(OracleSet):
    def predecessor(self, x):
        r = super().predecessor(x)
        return r + 1 if r is not None and r % 1000 == 17 else r


factory, _ = make_structure("fusion", 32, {})
print("fusion verifies clean:", verify_structure(factory, 32, 20_000, 5) is None)

d = verify_structure(lambda: OffByOne(32), 32, 20_000, 5)
print(f"planted bug: op {d.index} {d.op}({d.value:#x}) returned {d.got}, "
      f"wanted {d.expected}; minimized to {d.minimized_length} ops")
