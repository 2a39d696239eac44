"""
Two trees, one engine
=====================

BTreeSet and FusionTree share the same preemptive single-pass B-tree
engine; they differ only in how a node is searched. The plain tree scans
or bisects its key array, the fusion tree asks a fusion node, which keeps
per-node search at O(1) word operations for up to 16 keys.
"""

import random
import time

from predbench.btree import BTreeSet
from predbench.core import OracleSet
from predbench.fusion import FusionTree

rng = random.Random(11)
keys = [rng.getrandbits(40) for _ in range(60_000)]
queries = [rng.getrandbits(40) for _ in range(20_000)]

structures = {
    "btree B=64 linear": BTreeSet(40, B=64, node_search="linear"),
    "btree B=64 binary": BTreeSet(40, B=64, node_search="binary"),
    "fusion tree k=8": FusionTree(40, k=8),
    "fusion tree k=16": FusionTree(40, k=16),
}
oracle = OracleSet(40)
for x in keys:
    oracle.insert(x)

# Same keys into every tree, then time the query phase alone. Absolute
# numbers are interpreter-bound; the point is that every tree returns
# identical answers while organizing its nodes differently.
expected = [oracle.predecessor(q) for q in queries]
for name, tree in structures.items():
    t0 = time.perf_counter()
    for x in keys:
        tree.insert(x)
    t1 = time.perf_counter()
    got = [tree.predecessor(q) for q in queries]
    t2 = time.perf_counter()
    assert got == expected
    assert len(tree) == len(oracle)
    print(f"{name:18s} insert {len(keys) / (t1 - t0):>9.0f} ops/s   "
          f"query {len(queries) / (t2 - t1):>9.0f} ops/s   all answers agree")

# Deleting everything exercises the rebalancing paths: borrows, fuses, and
# root collapses. An empty tree must survive an audit.
tree = structures["fusion tree k=8"]
for x in keys:
    tree.delete(x)
print("fusion tree drained, size =", len(tree))
