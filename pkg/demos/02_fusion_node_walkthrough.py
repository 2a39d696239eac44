"""
Anatomy of a fusion node
========================

A fusion node stores up to k keys and answers predecessor queries with O(1)
word operations by compressing every key down to its distinguishing bits.
A tiny 5-bit universe makes the whole state printable.
"""

from predbench.fusion import FusionNode
from predbench.word_ops import popcount

node = FusionNode(k=8, width=5)
node.rebuild([2, 3, 12, 27])

keys, mask, _, _ = node.state()
bits = popcount(mask)


def render(row):
    branch, free = row
    out = []
    for j in range(bits - 1, -1, -1):
        out.append("*" if (free >> j) & 1 else str((branch >> j) & 1))
    return "".join(out)


# The mask marks the bit positions where adjacent keys first differ. Only
# those columns survive compression; every key shrinks to `bits` bits.
print("keys:", list(keys))
print(f"mask: {mask:05b}  ({bits} distinguishing positions)")

# Each row is the compressed key with don't-care positions (*) wherever the
# key never branches there. Don't cares are what make updates cheap: a new
# column only needs local repairs instead of recompressing every key.
for i, row in enumerate(node.rows()):
    print(f"  row {i}: key {keys[i]:2d} = {keys[i]:05b}  ->  {render(row)}")

# match(x) ranks x's compression among the rows in one packed comparison.
for x in (25, 4, 0b00111, 0b11000):
    print(f"match({x:05b}) = {node.match(x)}")

# match alone is not the predecessor rank: compression ignores bits outside
# the mask. predecessor() re-anchors at the deepest divergence and queries
# once more with the tail forced to all ones or all zeros.
print("predecessor(25) =", node.predecessor(25))
print("predecessor(4)  =", node.predecessor(4))

# Deleting a key can retire a distinguishing column. The node repacks the
# two neighbouring rows and the state is again exactly what a rebuild from
# scratch would produce.
node.delete(12)
keys, mask, _, _ = node.state()
bits = popcount(mask)
print("after delete(12):")
print(f"mask: {mask:05b}")
for i, row in enumerate(node.rows()):
    print(f"  row {i}: key {keys[i]:2d} -> {render(row)}")

check = FusionNode(k=8, width=5)
check.rebuild(list(keys))
print("state equals a fresh rebuild:", node.state() == check.state())
