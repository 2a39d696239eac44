"""
Life of a y-fast trie
=====================

Keys live in small sorted buckets; bucket representatives live in a binary
trie searched level by level. Representatives are lazy: deleting a key that
happens to be a representative leaves a dead marker in the trie rather than
restructuring it. Splits and merges keep every bucket within a constant
factor of the target size t.
"""

from predbench.yfast import YFastConfig, YFastTrie


def chain(tr):
    parts = [f"head{sorted(tr.head.keys)}"]
    for b in tr.bucket_list():
        tag = "-" if b.rep_dead else "+"
        parts.append(f"{b.rep}{tag}{sorted(b.keys)}")
    return "  ".join(parts)


tr = YFastTrie(5, YFastConfig(t=2, c=2, gamma=1.0))

# Inserts and deletes; +/- marks live/dead representatives. Watch rep 17
# die and come back, and rep 0 and 20 stay dead while their buckets keep
# answering queries for the keys that remain.
script = [("insert", x) for x in (0, 3, 17, 18, 19)]
script += [("delete", 17), ("insert", 20), ("insert", 21), ("insert", 23)]
script += [("delete", 20), ("insert", 17), ("insert", 6), ("delete", 0)]
script += [("insert", 7), ("insert", 9)]
for op, x in script:
    getattr(tr, op)(x)
    print(f"{op}({x:2d}) -> {chain(tr)}")

# The trie stores hash maps only between l_top (the deepest level that is
# conceptually full) and l_bot (below which no node branches). The level
# search binary-searches this window instead of all w levels.
print("search window: l_top =", tr.l_top, " l_bot =", tr.l_bot)

for q in (2, 20, 22, 16):
    print(f"predecessor({q}) = {tr.predecessor(q)}")

# Overflow: the sixth key pushes a bucket past c*t = 4, so it splits. The
# upper half founds a live representative (7); the dead rep 0 keeps the
# lower half.
tr.insert(8)
print("after insert(8):", chain(tr))

# Underflow: dropping to gamma*t - 1 = 1 key triggers a merge with the
# right neighbour gone and the trie two levels shallower.
tr2 = YFastTrie(5, YFastConfig(t=2, c=2, gamma=1.0))
for op, x in script:
    getattr(tr2, op)(x)
tr2.delete(21)
print("after delete(21):", chain(tr2))
print("search window: l_top =", tr2.l_top, " l_bot =", tr2.l_bot)
