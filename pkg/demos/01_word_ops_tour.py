"""
Word-level building blocks
==========================

Every structure in predbench leans on a handful of single-word bit tricks.
This tour shows what each primitive computes and how the portable fallback
is selected.
"""

from predbench import word_ops as W

# msb0 numbers bits from the least significant end (bit 0), so msb0(x) is
# the position of the highest set bit. tzcnt counts trailing zeros and
# defines tzcnt(0) = 64, one past the last bit of the word.
x = 0b1001_0100
print(f"x = {x:#010b}")
print("msb0(x)  =", W.msb0(x))
print("tzcnt(x) =", W.tzcnt(x))
print("popcount =", W.popcount(x))

# select1(x, h) walks to the h-th set bit, counting from 1.
for h in (1, 2, 3):
    print(f"select1(x, {h}) =", W.select1(x, h))

# extract_bits gathers the bits of x selected by a mask and packs them to
# the low end, exactly what PEXT does on x86.
mask = 0b1100_0100
print(f"extract_bits({x:#010b}, {mask:#010b}) = "
      f"{W.extract_bits(x, mask):#05b}")

# packed_rank treats a 64-bit word as eight byte lanes sorted ascending and
# counts how many lanes are <= y. It is the rank primitive fusion nodes use
# to search all keys of a node in one comparison.
lanes = 0x50_40_30_20_10_08_04_02  # bytes 2,4,8,16,32,48,64,80 low to high
print("packed_rank(lanes, 0x10) =", W.packed_rank(lanes, 0x10))
print("packed_rank(lanes, 0x55) =", W.packed_rank(lanes, 0x55))

# Sixteen-key nodes need sixteen 16-bit lanes, which no longer fit in one
# machine word. Word256 simulates a 4-limb word; packed_rank_wide ranks
# across all 16 lanes.
w = W.Word256.from_int(sum((i * 100) << (16 * i) for i in range(16)))
print("lane 3 of the wide word:", w.lane16(3))
print("packed_rank_wide(w, 750) =", W.packed_rank_wide(w, 750))

# Each primitive exists twice: a fast flavour using int.bit_count and big
# shifts, and a portable loop flavour. Setting PREDBENCH_NO_INTRINSICS=1
# before the first import forces the loops; both must agree bit for bit.
print("running on the portable path:", W.USING_PORTABLE)
