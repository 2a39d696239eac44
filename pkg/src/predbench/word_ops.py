"""Word-level primitives shared by every predecessor structure.

Every operation ships in two bit-exact flavours: a fast path that leans on
CPython's int machinery (``bit_length``/``bit_count`` compile down to hardware
bit-scan/popcount where available) plus SWAR arithmetic, and a portable path
that walks bits one at a time. The module binds one flavour at import time;
setting ``PREDBENCH_NO_INTRINSICS=1`` in the environment forces the portable
bindings. Both flavours stay importable under private names so tests can
compare them directly.

Bit positions are always counted 0-from-LSB.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

WORD_BITS = 64
MASK64 = (1 << 64) - 1

# Lane constants for packed comparisons. _LANE8_LSB is the broadcast
# multiplier (0^7 1)^8; the EVEN/GUARD pairs implement the borrow trick on
# alternating lanes so an 8-bit compare fits a 64-bit word without spare
# guard bits.
_LANE8_LSB = 0x0101010101010101
_LANE8_EVEN = 0x00FF00FF00FF00FF
_LANE8_GUARD = 0x0100010001000100
_LANE16_LSB = 0x0001000100010001
_LANE16_EVEN = 0x0000FFFF0000FFFF
_LANE16_GUARD = 0x0001000000010000


def _require_word(x: int) -> None:
    if not 0 <= x <= MASK64:
        raise ValueError(f"value out of 64-bit range: {x:#x}")


# ---------------------------------------------------------------------------
# fast flavour

def _msb0_fast(x: int) -> int:
    if x == 0:
        raise ValueError("msb0 undefined for 0")
    return x.bit_length() - 1


def _tzcnt_fast(x: int) -> int:
    if x == 0:
        return 64
    return (x & -x).bit_length() - 1


def _popcount_fast(x: int) -> int:
    return x.bit_count()


def _count_trailing_ones_fast(x: int) -> int:
    return _tzcnt_fast(~x & MASK64)


def _select1_fast(x: int, h: int) -> int:
    if h < 1 or h > x.bit_count():
        raise ValueError(f"select1: h={h} out of range for popcount {x.bit_count()}")
    pos = 0
    while True:
        byte = x & 0xFF
        c = byte.bit_count()
        if h <= c:
            while True:
                if byte & 1:
                    h -= 1
                    if h == 0:
                        return pos
                byte >>= 1
                pos += 1
        h -= c
        x >>= 8
        pos += 8


def _extract_bits_fast(x: int, m: int) -> int:
    # PEXT: walk set bits of the mask low-to-high, clearing each with m &= m-1.
    out = 0
    idx = 0
    while m:
        low = m & -m
        if x & low:
            out |= 1 << idx
        idx += 1
        m &= m - 1
    return out


def _packed_rank_fast(x: int, y: int, lane_bits: int = 8) -> int:
    if lane_bits != 8:
        raise ValueError("packed_rank handles 8-bit lanes; use packed_rank_wide for 16")
    if y >= 0xFF:
        return 8
    # Count lanes > y as lanes >= y+1 via the alternating-lane borrow trick,
    # on the broadcast (y+1) * (0^7 1)^8.
    t = (y + 1) * _LANE8_LSB
    ge_even = (((x & _LANE8_EVEN) | _LANE8_GUARD) - (t & _LANE8_EVEN)) & _LANE8_GUARD
    ge_odd = ((((x >> 8) & _LANE8_EVEN) | _LANE8_GUARD) - ((t >> 8) & _LANE8_EVEN)) & _LANE8_GUARD
    return 8 - ge_even.bit_count() - ge_odd.bit_count()


def _limb_rank16_fast(limb: int, y: int) -> int:
    # Count of the limb's four 16-bit lanes that are <= y.
    if y >= 0xFFFF:
        return 4
    t = (y + 1) * _LANE16_LSB
    ge_even = (((limb & _LANE16_EVEN) | _LANE16_GUARD) - (t & _LANE16_EVEN)) & _LANE16_GUARD
    ge_odd = ((((limb >> 16) & _LANE16_EVEN) | _LANE16_GUARD) - ((t >> 16) & _LANE16_EVEN)) & _LANE16_GUARD
    return 4 - ge_even.bit_count() - ge_odd.bit_count()


# ---------------------------------------------------------------------------
# portable flavour

def _msb0_portable(x: int) -> int:
    if x == 0:
        raise ValueError("msb0 undefined for 0")
    p = 0
    while x > 1:
        x >>= 1
        p += 1
    return p


def _tzcnt_portable(x: int) -> int:
    if x == 0:
        return 64
    n = 0
    while not x & 1:
        x >>= 1
        n += 1
    return n


def _popcount_portable(x: int) -> int:
    n = 0
    while x:
        n += x & 1
        x >>= 1
    return n


def _count_trailing_ones_portable(x: int) -> int:
    n = 0
    while x & 1:
        x >>= 1
        n += 1
    return n


def _select1_portable(x: int, h: int) -> int:
    if h < 1:
        raise ValueError(f"select1: h={h} out of range")
    pos = 0
    while x:
        if x & 1:
            h -= 1
            if h == 0:
                return pos
        x >>= 1
        pos += 1
    raise ValueError("select1: h exceeds popcount")


def _extract_bits_portable(x: int, m: int) -> int:
    out = 0
    idx = 0
    for i in range(64):
        if (m >> i) & 1:
            if (x >> i) & 1:
                out |= 1 << idx
            idx += 1
    return out


def _packed_rank_portable(x: int, y: int, lane_bits: int = 8) -> int:
    if lane_bits != 8:
        raise ValueError("packed_rank handles 8-bit lanes; use packed_rank_wide for 16")
    count = 0
    for i in range(8):
        lane = (x >> (8 * i)) & 0xFF
        if lane <= y:
            count += 1
    return count


def _limb_rank16_portable(limb: int, y: int) -> int:
    count = 0
    for i in range(4):
        lane = (limb >> (16 * i)) & 0xFFFF
        if lane <= y:
            count += 1
    return count


# ---------------------------------------------------------------------------
# flavour selection

def _env_forces_portable() -> bool:
    return os.environ.get("PREDBENCH_NO_INTRINSICS", "") not in ("", "0")


_HAS_FAST_INT = hasattr(int, "bit_count")

USING_PORTABLE = _env_forces_portable() or not _HAS_FAST_INT

if USING_PORTABLE:
    msb0 = _msb0_portable
    tzcnt = _tzcnt_portable
    popcount = _popcount_portable
    count_trailing_ones = _count_trailing_ones_portable
    select1 = _select1_portable
    extract_bits = _extract_bits_portable
    packed_rank = _packed_rank_portable
    _limb_rank16 = _limb_rank16_portable
else:
    msb0 = _msb0_fast
    tzcnt = _tzcnt_fast
    popcount = _popcount_fast
    count_trailing_ones = _count_trailing_ones_fast
    select1 = _select1_fast
    extract_bits = _extract_bits_fast
    packed_rank = _packed_rank_fast
    _limb_rank16 = _limb_rank16_fast


# ---------------------------------------------------------------------------
# simulated 256-bit word

@dataclass(frozen=True)
class Word256:
    """256-bit word simulated by four 64-bit limbs, least significant first.

    Supports only what 16-key fusion nodes need: bitwise logic, shifts, and
    16-bit lane access. All arithmetic is carried out limb-wise; ``from_int``
    and ``to_int`` exist for construction and testing.
    """

    limbs: tuple[int, int, int, int]

    ZERO: "Word256" = None  # patched below

    @classmethod
    def from_int(cls, v: int) -> "Word256":
        if not 0 <= v < 1 << 256:
            raise ValueError("value out of 256-bit range")
        return cls((v & MASK64, (v >> 64) & MASK64, (v >> 128) & MASK64, (v >> 192) & MASK64))

    def to_int(self) -> int:
        a, b, c, d = self.limbs
        return a | (b << 64) | (c << 128) | (d << 192)

    def __or__(self, other: "Word256") -> "Word256":
        a, b = self.limbs, other.limbs
        return Word256((a[0] | b[0], a[1] | b[1], a[2] | b[2], a[3] | b[3]))

    def __and__(self, other: "Word256") -> "Word256":
        a, b = self.limbs, other.limbs
        return Word256((a[0] & b[0], a[1] & b[1], a[2] & b[2], a[3] & b[3]))

    def __xor__(self, other: "Word256") -> "Word256":
        a, b = self.limbs, other.limbs
        return Word256((a[0] ^ b[0], a[1] ^ b[1], a[2] ^ b[2], a[3] ^ b[3]))

    def invert(self) -> "Word256":
        a = self.limbs
        return Word256((~a[0] & MASK64, ~a[1] & MASK64, ~a[2] & MASK64, ~a[3] & MASK64))

    def shift_left(self, k: int) -> "Word256":
        if k < 0:
            raise ValueError("negative shift")
        if k >= 256:
            return Word256((0, 0, 0, 0))
        words, bits = divmod(k, 64)
        src = self.limbs
        out = [0, 0, 0, 0]
        for i in range(3, words - 1, -1):
            lo = src[i - words] << bits
            carry = src[i - words - 1] >> (64 - bits) if bits and i - words - 1 >= 0 else 0
            out[i] = (lo | carry) & MASK64
        return Word256(tuple(out))

    def shift_right(self, k: int) -> "Word256":
        if k < 0:
            raise ValueError("negative shift")
        if k >= 256:
            return Word256((0, 0, 0, 0))
        words, bits = divmod(k, 64)
        src = self.limbs
        out = [0, 0, 0, 0]
        for i in range(0, 4 - words):
            hi = src[i + words] >> bits
            carry = src[i + words + 1] << (64 - bits) if bits and i + words + 1 <= 3 else 0
            out[i] = (hi | carry) & MASK64
        return Word256(tuple(out))

    def compare_unsigned(self, other: "Word256") -> int:
        """-1, 0, or 1, comparing as unsigned 256-bit values."""
        for i in range(3, -1, -1):
            a, b = self.limbs[i], other.limbs[i]
            if a != b:
                return -1 if a < b else 1
        return 0

    def __lt__(self, other: "Word256") -> bool:
        return self.compare_unsigned(other) < 0

    def lane16(self, i: int) -> int:
        return (self.limbs[i >> 2] >> (16 * (i & 3))) & 0xFFFF

    def is_zero(self) -> bool:
        return self.limbs == (0, 0, 0, 0)


Word256.ZERO = Word256((0, 0, 0, 0))


def broadcast16(v: int) -> Word256:
    """Replicate a 16-bit value into all sixteen lanes of a Word256."""
    if not 0 <= v <= 0xFFFF:
        raise ValueError("lane value out of 16-bit range")
    limb = v * _LANE16_LSB
    return Word256((limb, limb, limb, limb))


def packed_rank_wide(x: Word256, y: int, lane_bits: int = 16) -> int:
    """Count of the sixteen 16-bit lanes of x that are <= y.

    Lanes are read least significant first and assumed non-decreasing, so the
    count doubles as the smallest lane index exceeding y. Combines four
    per-limb ranks; each limb uses whichever 64-bit flavour is bound.
    """
    if lane_bits != 16:
        raise ValueError("packed_rank_wide handles 16-bit lanes")
    r = _limb_rank16(x.limbs[0], y)
    r += _limb_rank16(x.limbs[1], y)
    r += _limb_rank16(x.limbs[2], y)
    r += _limb_rank16(x.limbs[3], y)
    return r
