"""Shared predecessor-set contract and the sorted-array reference set.

Every structure in this package stores unsigned w-bit integer keys,
w in {32, 40, 64}, and answers predecessor(x) = max{y in S | y <= x}.
The contract is deliberately small:

- ``insert(x) -> bool``: False iff x was already present (duplicate no-op).
- ``delete(x) -> bool``: False iff x was absent.
- ``predecessor(x) -> int | None``: None iff x is below every stored key.
- ``len(s)``: number of stored keys.

40-bit keys live in 64-bit words; the width is a construction parameter and
keys are validated against it.
"""

from __future__ import annotations

from array import array
from bisect import bisect_right

SUPPORTED_WIDTHS = (32, 40, 64)  # benchmark widths; the CLI offers only these


def check_width(width: int) -> int:
    # Structures accept any machine-word width so tests can run tiny
    # universes (w = 5) exhaustively against brute force.
    if not 1 <= width <= 64:
        raise ValueError(f"key width {width} outside [1, 64]")
    return width


class PredecessorSet:
    """Contract base. Subclasses set ``width`` and implement the four ops."""

    width: int

    def _check_key(self, x: int) -> int:
        if not 0 <= x < (1 << self.width):
            raise ValueError(f"key {x:#x} out of range for width {self.width}")
        return x

    def insert(self, x: int) -> bool:
        raise NotImplementedError

    def delete(self, x: int) -> bool:
        raise NotImplementedError

    def predecessor(self, x: int) -> int | None:
        raise NotImplementedError

    def __len__(self) -> int:
        raise NotImplementedError


class OracleSet(PredecessorSet):
    """Sorted dynamic array of keys; the differential-testing reference.

    array('Q') keeps elements as raw 64-bit values (8 bytes each), so the
    memory meter sees an honest 8n-byte floor, and bisect gives O(lg n)
    searches with O(n) memmove-speed shifts on update.
    """

    __slots__ = ("width", "_keys")

    def __init__(self, width: int = 64):
        self.width = check_width(width)
        self._keys = array("Q")

    def insert(self, x: int) -> bool:
        self._check_key(x)
        keys = self._keys
        i = bisect_right(keys, x)
        if i > 0 and keys[i - 1] == x:
            return False
        keys.insert(i, x)
        return True

    def delete(self, x: int) -> bool:
        self._check_key(x)
        keys = self._keys
        i = bisect_right(keys, x)
        if i > 0 and keys[i - 1] == x:
            del keys[i - 1]
            return True
        return False

    def predecessor(self, x: int) -> int | None:
        self._check_key(x)
        keys = self._keys
        i = bisect_right(keys, x)
        return keys[i - 1] if i > 0 else None

    def __contains__(self, x: int) -> bool:
        keys = self._keys
        i = bisect_right(keys, x)
        return i > 0 and keys[i - 1] == x

    def __len__(self) -> int:
        return len(self._keys)

    def __iter__(self):
        return iter(self._keys)

    def max(self) -> int:
        return self._keys[-1]

    def min(self) -> int:
        return self._keys[0]
