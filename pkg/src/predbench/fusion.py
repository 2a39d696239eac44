"""Dynamic fusion nodes and the fusion tree built from them.

A fusion node holds up to k keys (k in {8, 16}) and answers predecessor
queries with O(1) word operations. The keys' compact binary trie has at most
k-1 branching bit positions, collected in a mask M. Each key is stored as a
compressed row: its bits at the positions of M, with positions below the
key's own lowest branch point turned into don't cares. Rows live packed in a
single word, k-bit lane per row, split across two matrices:

- ``branch``: the concrete bits (zero at don't cares),
- ``free``:   one where the row has a don't care.

A query x is compressed to xhat = extract_bits(x, M); completing every row by
substituting xhat's bits at the row's don't cares makes lane i compare like
key i, so one packed rank of the completed word against xhat yields the
number of keys whose completed encoding is <= xhat (``match``). Predecessor
navigation picks the rank-neighbour sharing the longest prefix with x and
re-runs match on x with the bits below the divergence forced to all-zeros
or all-ones.

Rows are kept physically sorted by key. Updates splice rows and columns in
and out of the packed words with constant-bounded loops; the canonical state
(identical to rebuilding from the sorted key list) is maintained at all
times, which tests assert step by step.

The fusion tree embeds fusion nodes as the per-node search structure of a
B-tree of degree k.
"""

from __future__ import annotations

from .btree import BTreeEngine
from .core import PredecessorSet, check_width
from .word_ops import (
    MASK64,
    Word256,
    _LANE8_LSB,
    broadcast16,
    count_trailing_ones,
    extract_bits,
    msb0,
    packed_rank,
    packed_rank_wide,
    popcount,
    select1,
)


class _Lanes8:
    """Row-matrix plumbing for k=8: eight 8-bit lanes in one 64-bit int."""

    k = 8
    lane_max = 0xFF
    zero = 0

    _LOW = [((1 << (8 * i)) - 1) for i in range(9)]          # rows < i
    _BCAST = [v * _LANE8_LSB for v in range(256)]
    _TOPBITS = 0x8080808080808080

    @staticmethod
    def broadcast(v: int) -> int:
        return v * _LANE8_LSB

    @classmethod
    def get_row(cls, word: int, i: int) -> int:
        return (word >> (8 * i)) & 0xFF

    @classmethod
    def splice_row_in(cls, word: int, i: int, row: int) -> int:
        low = word & cls._LOW[i]
        high = (word & ~cls._LOW[i] & MASK64) << 8
        return (low | (row << (8 * i)) | high) & MASK64

    @classmethod
    def splice_row_out(cls, word: int, i: int) -> int:
        low = word & cls._LOW[i]
        high = (word >> 8) & ~cls._LOW[i] & MASK64
        return low | high

    @classmethod
    def set_row(cls, word: int, i: int, row: int) -> int:
        return (word & ~(0xFF << (8 * i))) | (row << (8 * i))

    @classmethod
    def col_insert(cls, word: int, c: int, colbits: int) -> int:
        """Open a new bit position c in every lane; colbits supplies lane bits
        already shifted to position c of each lane."""
        keep = cls.broadcast((1 << c) - 1)
        moved = (word & ~keep & MASK64) << 1
        return ((word & keep) | moved | colbits) & MASK64

    @classmethod
    def col_delete(cls, word: int, c: int) -> int:
        keep = cls.broadcast((1 << c) - 1)
        moved = (word >> 1) & ~keep & ~cls._TOPBITS & MASK64
        return (word & keep) | moved

    @staticmethod
    def rank(word: int, y: int) -> int:
        return packed_rank(word, y)

    @classmethod
    def rank_linear(cls, word: int, y: int) -> int:
        n = 0
        for i in range(8):
            if (word >> (8 * i)) & 0xFF <= y:
                n += 1
        return n


class _Lanes16:
    """Row-matrix plumbing for k=16: sixteen 16-bit lanes in a Word256."""

    k = 16
    lane_max = 0xFFFF
    zero = Word256.ZERO

    _LOW = [Word256.from_int((1 << (16 * i)) - 1) for i in range(17)]
    _TOPBITS = broadcast16(0x8000)

    @staticmethod
    def broadcast(v: int) -> Word256:
        return broadcast16(v)

    @classmethod
    def get_row(cls, word: Word256, i: int) -> int:
        return word.lane16(i)

    @classmethod
    def splice_row_in(cls, word: Word256, i: int, row: int) -> Word256:
        low = word & cls._LOW[i]
        high = (word & cls._LOW[i].invert()).shift_left(16)
        return low | Word256.from_int(row << (16 * i)) | high

    @classmethod
    def splice_row_out(cls, word: Word256, i: int) -> Word256:
        low = word & cls._LOW[i]
        high = word.shift_right(16) & cls._LOW[i].invert()
        return low | high

    @classmethod
    def set_row(cls, word: Word256, i: int, row: int) -> Word256:
        hole = Word256.from_int(0xFFFF << (16 * i)).invert()
        return (word & hole) | Word256.from_int(row << (16 * i))

    @classmethod
    def col_insert(cls, word: Word256, c: int, colbits: Word256) -> Word256:
        keep = cls.broadcast((1 << c) - 1)
        moved = (word & keep.invert()).shift_left(1)
        return (word & keep) | moved | colbits

    @classmethod
    def col_delete(cls, word: Word256, c: int) -> Word256:
        keep = cls.broadcast((1 << c) - 1)
        moved = word.shift_right(1) & keep.invert() & cls._TOPBITS.invert()
        return (word & keep) | moved

    @staticmethod
    def rank(word: Word256, y: int) -> int:
        return packed_rank_wide(word, y)

    @classmethod
    def rank_linear(cls, word: Word256, y: int) -> int:
        n = 0
        for i in range(16):
            if word.lane16(i) <= y:
                n += 1
        return n


def _lowest_branch(keys: list[int], i: int) -> int:
    """Lowest branching bit level on keys[i]'s root-to-leaf path, or -1 for a
    singleton (every position is a don't care then)."""
    d = -1
    if i > 0:
        d = msb0(keys[i] ^ keys[i - 1])
    if i + 1 < len(keys):
        dr = msb0(keys[i] ^ keys[i + 1])
        d = dr if d < 0 else min(d, dr)
    return d


class FusionNode:
    """One dynamic fusion node: ≤ k sorted keys plus packed row matrices.

    ``rank_backend`` selects how match ranks the completed rows: 'packed'
    uses the word-parallel lane compare, 'linear' scans lanes one by one.
    """

    __slots__ = ("k", "width", "lanes", "keys", "mask", "branch", "free", "_rank")

    def __init__(self, k: int = 8, width: int = 64, rank_backend: str = "packed"):
        if k == 8:
            self.lanes = _Lanes8
        elif k == 16:
            self.lanes = _Lanes16
        else:
            raise ValueError("fusion node supports k=8 or k=16")
        self.k = k
        self.width = check_width(width)
        self.keys: list[int] = []
        self.mask = 0
        self.branch = self.lanes.zero
        self.free = self.lanes.zero
        if rank_backend == "packed":
            self._rank = self.lanes.rank
        elif rank_backend == "linear":
            self._rank = self.lanes.rank_linear
        else:
            raise ValueError(f"unknown rank backend {rank_backend!r}")

    # -- canonical construction ------------------------------------------

    def _row_for(self, i: int, mask: int) -> tuple[int, int]:
        """(branch, free) lane for keys[i] under the given mask: don't cares
        at mask positions strictly below the key's lowest branch level."""
        d = _lowest_branch(self.keys, i)
        if d < 0:
            nfree = popcount(mask)
        else:
            nfree = popcount(mask & ((1 << d) - 1))
        free = (1 << nfree) - 1
        branch = extract_bits(self.keys[i], mask) & ~free
        return branch, free

    def _pack_rows(self) -> None:
        lanes = self.lanes
        branch = lanes.zero
        free = lanes.zero
        for i in range(len(self.keys)):
            rb, rf = self._row_for(i, self.mask)
            branch = lanes.set_row(branch, i, rb)
            free = lanes.set_row(free, i, rf)
        for i in range(len(self.keys), self.k):
            branch = lanes.set_row(branch, i, lanes.lane_max)
            free = lanes.set_row(free, i, 0)
        self.branch = branch
        self.free = free

    def rebuild(self, keys=None) -> None:
        """Recompute the whole state from the sorted key list. This is the
        canonicalization every incremental update must be equivalent to."""
        if keys is not None:
            self.keys = list(keys)
            if any(self.keys[i] >= self.keys[i + 1] for i in range(len(self.keys) - 1)):
                raise ValueError("rebuild requires strictly ascending keys")
            if len(self.keys) > self.k:
                raise ValueError("too many keys for this node")
        mask = 0
        for i in range(len(self.keys) - 1):
            mask |= 1 << msb0(self.keys[i] ^ self.keys[i + 1])
        self.mask = mask
        self._pack_rows()

    # -- queries -----------------------------------------------------------

    def match(self, x: int) -> int:
        """1-based rank of x's completed compression among the rows; 0 means
        below every row."""
        xhat = extract_bits(x, self.mask)
        lanes = self.lanes
        completed = self.branch | (self.free & lanes.broadcast(xhat))
        r = self._rank(completed, xhat)
        # Padding lanes hold lane_max and xhat < 2^(k-1), so they never rank;
        # the clamp guards the empty-mask edge where xhat can reach 0.
        n = len(self.keys)
        return r if r < n else n

    def predecessor_rank(self, x: int) -> int:
        """Rank r in [0, n]: keys[r-1] is the predecessor of x, r=0 if none."""
        n = len(self.keys)
        if n == 0:
            return 0
        r = self.match(x)
        if r > 0 and self.keys[r - 1] == x:
            return r
        # x is absent; its deepest divergence from the stored trie is against
        # whichever rank-neighbour of the match shares the longer prefix.
        if r > 0:
            y = self.keys[r - 1]
            p = msb0(x ^ y)
            if r < n:
                q = msb0(x ^ self.keys[r])
                if q < p:
                    p = q
        else:
            p = msb0(x ^ self.keys[0])
        low = (1 << (p + 1)) - 1
        if (x >> p) & 1:
            # x leaves the divergence node rightward: every key below the
            # node is < x and match lands on that subtree's maximum.
            return self.match(x | low)
        # x leaves it leftward: match against the prefix padded with zeros
        # counts the keys below the subtree, plus the subtree minimum when
        # don't cares make its completed row tie the query.
        r0 = self.match(x & ~low & MASK64)
        if r0 > 0 and self.keys[r0 - 1] <= x:
            return r0
        return r0 - 1 if r0 > 0 else 0

    def predecessor(self, x: int) -> int | None:
        r = self.predecessor_rank(x)
        return self.keys[r - 1] if r > 0 else None

    def __contains__(self, x: int) -> bool:
        r = self.match(x)
        return r > 0 and self.keys[r - 1] == x

    def __len__(self) -> int:
        return len(self.keys)

    # -- updates -----------------------------------------------------------

    def insert(self, x: int) -> bool:
        n = len(self.keys)
        if n >= self.k:
            raise ValueError("fusion node full; split at the tree layer first")
        r = self.predecessor_rank(x) if n else 0
        if r > 0 and self.keys[r - 1] == x:
            return False
        old_mask = self.mask
        mask = old_mask
        if r > 0:
            mask |= 1 << msb0(x ^ self.keys[r - 1])
        if r < n:
            mask |= 1 << msb0(x ^ self.keys[r])
        # Adjacent pairs share their higher branch with the old pair (a, b),
        # so at most one mask bit is new; the column opens against the old
        # key list, whose row indices still line up with the matrices.
        if mask != old_mask:
            self._grow_column(old_mask, mask)
        self.keys.insert(r, x)
        lanes = self.lanes
        self.branch = lanes.splice_row_in(self.branch, r, 0)
        self.free = lanes.splice_row_in(self.free, r, 0)
        # The new key changes the lowest-branch level of at most its two
        # physical neighbours; those rows and the new one are recomputed.
        for i in (r - 1, r, r + 1):
            if 0 <= i < len(self.keys):
                rb, rf = self._row_for(i, mask)
                self.branch = lanes.set_row(self.branch, i, rb)
                self.free = lanes.set_row(self.free, i, rf)
        self.mask = mask
        self._refresh_padding()
        return True

    def _grow_column(self, old_mask: int, new_mask: int) -> None:
        """Open the compressed column for the one bit in new_mask - old_mask."""
        j = msb0(new_mask & ~old_mask & MASK64)
        c = popcount(new_mask & ((1 << j) - 1))
        lanes = self.lanes
        branch_col = lanes.zero
        free_col = lanes.zero
        for i, y in enumerate(self.keys):
            # A row takes a free bit if the new level sits inside its
            # don't-care span, else the key's concrete bit at that level.
            if self._col_is_free(i, j):
                free_col = lanes.set_row(free_col, i, 1 << c)
            elif (y >> j) & 1:
                branch_col = lanes.set_row(branch_col, i, 1 << c)
        self.branch = lanes.col_insert(self.branch, c, branch_col)
        self.free = lanes.col_insert(self.free, c, free_col)

    def _col_is_free(self, i: int, level: int) -> bool:
        d = _lowest_branch(self.keys, i)
        return d < 0 or level < d

    def delete(self, x: int) -> bool:
        n = len(self.keys)
        if n == 0:
            return False
        r = self.match(x)
        if r == 0 or self.keys[r - 1] != x:
            return False
        i = r - 1
        lanes = self.lanes
        if n == 1:
            self.keys.clear()
            self.mask = 0
            self._pack_rows()
            return True
        # Level j where x branches off: first concrete column of its row,
        # found from the row's trailing don't cares.
        row_free = lanes.get_row(self.free, i)
        h = 1 + count_trailing_ones(row_free)
        j = select1(self.mask, h)
        del self.keys[i]
        self.branch = lanes.splice_row_out(self.branch, i)
        self.free = lanes.splice_row_out(self.free, i)
        # j stays distinguishing iff some adjacent remaining pair still shares
        # all bits above j and differs at j. Pairs from unrelated subtrees can
        # hold differing concrete bits at j without any branch there, so a
        # plain column scan is not equivalent.
        still = False
        shift = j + 1
        for t in range(len(self.keys) - 1):
            a, b = self.keys[t], self.keys[t + 1]
            if a >> shift == b >> shift and ((a ^ b) >> j) & 1:
                still = True
                break
        if not still:
            c = popcount(self.mask & ((1 << j) - 1))
            self.mask &= ~(1 << j)
            self.branch = lanes.col_delete(self.branch, c)
            self.free = lanes.col_delete(self.free, c)
        # The two keys that became adjacent may have risen branch points;
        # their rows are recomputed against the (possibly shrunk) mask.
        for t in (i - 1, i):
            if 0 <= t < len(self.keys):
                rb, rf = self._row_for(t, self.mask)
                self.branch = lanes.set_row(self.branch, t, rb)
                self.free = lanes.set_row(self.free, t, rf)
        self._refresh_padding()
        return True

    def _refresh_padding(self) -> None:
        lanes = self.lanes
        for i in range(len(self.keys), self.k):
            self.branch = lanes.set_row(self.branch, i, lanes.lane_max)
            self.free = lanes.set_row(self.free, i, 0)

    # -- introspection for tests ------------------------------------------

    def state(self) -> tuple:
        return (tuple(self.keys), self.mask, self.branch, self.free)

    def rows(self) -> list[tuple[int, int]]:
        lanes = self.lanes
        return [
            (lanes.get_row(self.branch, i), lanes.get_row(self.free, i))
            for i in range(len(self.keys))
        ]


class _FusionNodeSearch:
    """Per-node search strategy wiring fusion nodes into the B-tree engine."""

    mirrors = True

    def __init__(self, k: int, width: int, rank_backend: str):
        self.k = k
        self.width = width
        self.rank_backend = rank_backend

    def attach(self, node) -> None:
        node.aux = FusionNode(self.k, self.width, self.rank_backend)

    def rank(self, node, x: int) -> int:
        return node.aux.predecessor_rank(x)

    def on_insert(self, node, x: int) -> None:
        node.aux.insert(x)

    def on_delete(self, node, x: int) -> None:
        node.aux.delete(x)

    def on_bulk(self, node) -> None:
        node.aux.rebuild(node.keys[: node.nkeys])


class FusionTree(PredecessorSet):
    """B-tree of degree k whose in-node splitter search is a fusion node."""

    __slots__ = ("width", "k", "_engine")

    def __init__(self, width: int = 64, k: int = 8, rank_backend: str = "packed"):
        self.width = check_width(width)
        self.k = k
        strategy = _FusionNodeSearch(k, width, rank_backend)
        self._engine = BTreeEngine(capacity=k, strategy=strategy)

    def insert(self, x: int) -> bool:
        self._check_key(x)
        return self._engine.insert(x)

    def delete(self, x: int) -> bool:
        self._check_key(x)
        return self._engine.delete(x)

    def predecessor(self, x: int) -> int | None:
        self._check_key(x)
        return self._engine.predecessor(x)

    def __len__(self) -> int:
        return self._engine.size
