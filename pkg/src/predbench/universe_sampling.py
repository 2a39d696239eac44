"""Two-level predecessor structure over a sampled universe.

Keys are split at a cut of k_b bits: the high bits number a bucket (b = 2^k_b
consecutive values), the low bits are the truncated key stored inside it.
Active buckets are found through a top level that answers "rightmost active
bucket at or before i" either with a direct-indexed pointer array or with a
hash table probed downward. Inside a bucket, truncated keys live in a b-bit
bit vector, an unsorted list, or a hybrid that switches representation when
its population crosses configured thresholds (list above theta_max becomes a
bit vector, bit vector below theta_min reverts to a list).

The structure is intended for moderate universes; construction refuses
width 64, where the top level would be unmanageable.
"""

from __future__ import annotations

import sys
from array import array
from dataclasses import dataclass

from .core import PredecessorSet, check_width
from .word_ops import msb0, tzcnt

BUCKET_KINDS = ("bitvector", "list", "hybrid")
TOP_KINDS = ("array", "hash")


@dataclass(frozen=True)
class USConfig:
    k_b: int = 16
    top_kind: str = "array"
    bucket_kind: str = "hybrid"
    theta_min: int = 1 << 9
    theta_max: int = 1 << 10

    def __post_init__(self):
        if self.top_kind not in TOP_KINDS:
            raise ValueError(f"top_kind must be one of {TOP_KINDS}")
        if self.bucket_kind not in BUCKET_KINDS:
            raise ValueError(f"bucket_kind must be one of {BUCKET_KINDS}")
        if self.k_b < 1:
            raise ValueError("k_b must be positive")
        if self.bucket_kind == "hybrid":
            if not 0 < self.theta_min <= self.theta_max < (1 << self.k_b):
                raise ValueError("hybrid thresholds need 0 < theta_min <= theta_max < b")


def default_config(bucket_kind: str, top_kind: str = "array") -> USConfig:
    """The experiment defaults: wide buckets for bit vectors (cheap bits),
    narrow for lists (short scans), the middle for the hybrid."""
    k_b = {"bitvector": 24, "list": 10, "hybrid": 16}[bucket_kind]
    return USConfig(k_b=k_b, top_kind=top_kind, bucket_kind=bucket_kind)


def _typecode(k_b: int) -> str:
    if k_b <= 8:
        return "B"
    if k_b <= 16:
        return "H"
    if k_b <= 32:
        return "I"
    return "Q"


class Bucket:
    """One active bucket: population count, cached extremes, and storage that
    is either a bit vector over [0, b) or an unsorted array of truncated keys."""

    __slots__ = ("index", "kind", "count", "min_t", "max_t", "bits", "lst")

    def __init__(self, index: int):
        self.index = index
        self.kind = ""
        self.count = 0
        self.min_t = 0
        self.max_t = 0
        self.bits = None
        self.lst = None

    def storage_bytes(self) -> int:
        store = self.bits if self.kind == "bv" else self.lst
        return sys.getsizeof(store)


def _new_bv(b: int) -> array:
    return array("Q", bytes(8 * ((b + 63) >> 6)))


def bucket_contains(bucket: Bucket, xt: int) -> bool:
    if bucket.kind == "bv":
        return (bucket.bits[xt >> 6] >> (xt & 63)) & 1 == 1
    return xt in bucket.lst


def bucket_pred(bucket: Bucket, xt: int) -> int | None:
    """Largest truncated key <= xt inside the bucket, None if there is none."""
    if bucket.kind == "bv":
        bits = bucket.bits
        wi = xt >> 6
        word = bits[wi] & ((1 << ((xt & 63) + 1)) - 1)
        while word == 0:
            wi -= 1
            if wi < 0:
                return None
            word = bits[wi]
        return (wi << 6) | msb0(word)
    best = -1
    for v in bucket.lst:
        if best < v <= xt:
            best = v
    return best if best >= 0 else None


def _bv_extremes(bits: array) -> tuple[int, int]:
    lo = 0
    while bits[lo] == 0:
        lo += 1
    hi = len(bits) - 1
    while bits[hi] == 0:
        hi -= 1
    return (lo << 6) | tzcnt(bits[lo]), (hi << 6) | msb0(bits[hi])


class TopArray:
    """Pointer array over bucket numbers: entry j links the rightmost active
    bucket at or before j. Activation rewrites the run of entries up to the
    next active bucket; the allocation grows with geometric headroom and is
    only released when the structure empties."""

    __slots__ = ("base", "entries", "i_min", "i_max")

    def __init__(self):
        self.base = 0
        self.entries: list[Bucket | None] = []
        self.i_min: int | None = None
        self.i_max: int | None = None

    def get(self, i: int) -> Bucket | None:
        """The active bucket numbered exactly i, if any."""
        if self.i_min is None or not self.i_min <= i <= self.i_max:
            return None
        e = self.entries[i - self.base]
        return e if e is not None and e.index == i else None

    def locate(self, i: int) -> Bucket | None:
        """Rightmost active bucket <= i."""
        if self.i_min is None or i < self.i_min:
            return None
        if i > self.i_max:
            i = self.i_max
        return self.entries[i - self.base]

    def locate_before(self, i: int) -> Bucket | None:
        """Rightmost active bucket strictly below i."""
        if self.i_min is None or i <= self.i_min:
            return None
        return self.locate(i - 1)

    def _ensure_slot(self, i: int) -> None:
        if i < self.base:
            pad = max(self.base - i, len(self.entries))
            self.entries[0:0] = [None] * pad
            self.base -= pad
        elif i >= self.base + len(self.entries):
            pad = max(i - (self.base + len(self.entries)) + 1, len(self.entries))
            self.entries.extend([None] * pad)

    def activate(self, bucket: Bucket) -> None:
        i = bucket.index
        if self.i_min is None:
            self.base = i
            self.entries = [bucket]
            self.i_min = self.i_max = i
            return
        self._ensure_slot(i)
        base, entries = self.base, self.entries
        if i < self.i_min:
            for j in range(i, self.i_min):
                entries[j - base] = bucket
            self.i_min = i
        elif i > self.i_max:
            rightmost = entries[self.i_max - base]
            for j in range(self.i_max + 1, i):
                entries[j - base] = rightmost
            entries[i - base] = bucket
            self.i_max = i
        else:
            old = entries[i - base]
            j = i
            while j <= self.i_max and entries[j - base] is old:
                entries[j - base] = bucket
                j += 1

    def deactivate(self, bucket: Bucket) -> None:
        i = bucket.index
        if self.i_min == self.i_max:
            self.base = 0
            self.entries = []
            self.i_min = self.i_max = None
            return
        base, entries = self.base, self.entries
        if i == self.i_min:
            j = i
            while entries[j - base] is bucket:
                entries[j - base] = None
                j += 1
            self.i_min = j
        elif i == self.i_max:
            new_max = entries[i - 1 - base].index
            for j in range(new_max + 1, i + 1):
                entries[j - base] = None
            self.i_max = new_max
        else:
            prev = entries[i - 1 - base]
            j = i
            while j <= self.i_max and entries[j - base] is bucket:
                entries[j - base] = prev
                j += 1


class TopHash:
    """Hash table from active bucket number to bucket; lookups for inactive
    numbers probe downward one number at a time."""

    __slots__ = ("table", "i_min", "i_max")

    def __init__(self):
        self.table: dict[int, Bucket] = {}
        self.i_min: int | None = None
        self.i_max: int | None = None

    def get(self, i: int) -> Bucket | None:
        return self.table.get(i)

    def locate(self, i: int) -> Bucket | None:
        if self.i_min is None or i < self.i_min:
            return None
        if i >= self.i_max:
            return self.table[self.i_max]
        table = self.table
        while i not in table:
            i -= 1
        return table[i]

    def locate_before(self, i: int) -> Bucket | None:
        if self.i_min is None or i <= self.i_min:
            return None
        return self.locate(i - 1)

    def activate(self, bucket: Bucket) -> None:
        i = bucket.index
        self.table[i] = bucket
        if self.i_min is None:
            self.i_min = self.i_max = i
        else:
            self.i_min = min(self.i_min, i)
            self.i_max = max(self.i_max, i)

    def deactivate(self, bucket: Bucket) -> None:
        i = bucket.index
        del self.table[i]
        if not self.table:
            self.i_min = self.i_max = None
            return
        table = self.table
        if i == self.i_min:
            while i not in table:
                i += 1
            self.i_min = i
        elif i == self.i_max:
            while i not in table:
                i -= 1
            self.i_max = i


class UniverseSampling(PredecessorSet):
    """The two-level structure: top level over active buckets, truncated keys
    in the buckets. See the module docstring for the layout."""

    __slots__ = ("width", "config", "k_b", "b", "_tc", "top", "_size")

    def __init__(self, width: int = 32, config: USConfig | None = None):
        self.width = check_width(width)
        if width == 64:
            raise ValueError("universe sampling does not support 64-bit keys")
        self.config = config = config if config is not None else USConfig()
        if config.k_b >= width:
            raise ValueError("bucket bit count must be below the key width")
        self.k_b = config.k_b
        self.b = 1 << config.k_b
        self._tc = _typecode(config.k_b)
        self.top = TopArray() if config.top_kind == "array" else TopHash()
        self._size = 0

    # -- bucket storage management -----------------------------------------

    def _new_bucket(self, i: int) -> Bucket:
        bucket = Bucket(i)
        if self.config.bucket_kind == "bitvector":
            bucket.kind = "bv"
            bucket.bits = _new_bv(self.b)
        else:
            bucket.kind = "ul"
            bucket.lst = array(self._tc)
        return bucket

    def _add(self, bucket: Bucket, xt: int) -> None:
        if bucket.kind == "bv":
            bucket.bits[xt >> 6] |= 1 << (xt & 63)
        else:
            bucket.lst.append(xt)
        bucket.count += 1
        if bucket.count == 1:
            bucket.min_t = bucket.max_t = xt
        else:
            if xt < bucket.min_t:
                bucket.min_t = xt
            if xt > bucket.max_t:
                bucket.max_t = xt
        if (
            self.config.bucket_kind == "hybrid"
            and bucket.kind == "ul"
            and bucket.count > self.config.theta_max
        ):
            bits = _new_bv(self.b)
            for v in bucket.lst:
                bits[v >> 6] |= 1 << (v & 63)
            bucket.kind = "bv"
            bucket.bits = bits
            bucket.lst = None

    def _remove(self, bucket: Bucket, xt: int) -> None:
        if bucket.kind == "bv":
            bucket.bits[xt >> 6] &= ~(1 << (xt & 63))
        else:
            lst = bucket.lst
            i = lst.index(xt)
            lst[i] = lst[-1]
            lst.pop()
        bucket.count -= 1
        if bucket.count == 0:
            return
        if (
            self.config.bucket_kind == "hybrid"
            and bucket.kind == "bv"
            and bucket.count < self.config.theta_min
        ):
            bucket.kind = "ul"
            bucket.lst = array(self._tc, self._iter_bv(bucket.bits))
            bucket.bits = None
        # Cached extremes are refreshed only when the removal hits them.
        if xt == bucket.min_t or xt == bucket.max_t:
            if bucket.kind == "bv":
                bucket.min_t, bucket.max_t = _bv_extremes(bucket.bits)
            else:
                bucket.min_t = min(bucket.lst)
                bucket.max_t = max(bucket.lst)

    @staticmethod
    def _iter_bv(bits: array):
        for wi, word in enumerate(bits):
            while word:
                low = word & -word
                yield (wi << 6) | (low.bit_length() - 1)
                word ^= low

    # -- the predecessor-set contract ---------------------------------------

    def insert(self, x: int) -> bool:
        self._check_key(x)
        i = x >> self.k_b
        xt = x & (self.b - 1)
        bucket = self.top.get(i)
        if bucket is None:
            bucket = self._new_bucket(i)
            self._add(bucket, xt)
            self.top.activate(bucket)
        else:
            if bucket_contains(bucket, xt):
                return False
            self._add(bucket, xt)
        self._size += 1
        return True

    def delete(self, x: int) -> bool:
        self._check_key(x)
        i = x >> self.k_b
        xt = x & (self.b - 1)
        bucket = self.top.get(i)
        if bucket is None or not bucket_contains(bucket, xt):
            return False
        self._remove(bucket, xt)
        if bucket.count == 0:
            self.top.deactivate(bucket)
        self._size -= 1
        return True

    def predecessor(self, x: int) -> int | None:
        self._check_key(x)
        i = x >> self.k_b
        xt = x & (self.b - 1)
        bucket = self.top.locate(i)
        if bucket is None:
            return None
        if bucket.index == i:
            if xt >= bucket.min_t:
                return (i << self.k_b) | bucket_pred(bucket, xt)
            bucket = self.top.locate_before(i)
            if bucket is None:
                return None
        return (bucket.index << self.k_b) | bucket.max_t

    def __len__(self) -> int:
        return self._size

    # -- test support ---------------------------------------------------------

    def active_buckets(self) -> list[Bucket]:
        top = self.top
        if top.i_min is None:
            return []
        if isinstance(top, TopHash):
            return [top.table[i] for i in sorted(top.table)]
        seen = []
        for i in range(top.i_min, top.i_max + 1):
            e = top.entries[i - top.base]
            if e is not None and e.index == i:
                seen.append(e)
        return seen
