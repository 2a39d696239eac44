"""Y-fast trie: buckets of keys chained in order, indexed by a binary trie
over one representative per bucket.

A sentinel head bucket holds keys smaller than every representative; real
buckets hold keys in [rep, next rep). A representative may be "dead": its key
was deleted but it keeps anchoring the bucket in the trie until the bucket
merges away. Buckets split above c*t keys (the upper half founds a new, live
representative) and merge below gamma*t with a neighbour, re-splitting when
the union overflows.

The trie is stored as one hash map per level, keyed by prefix, holding child
flags and min/max descendant bucket links. Only levels above the cut l_bot
(one past the deepest level where any node has two children) are stored;
below the cut every node would be unary. A lookup binary-searches the stored
levels for the deepest one containing the query's prefix, starting from
l_top, the deepest level that is conceptually full, then steps to a bucket
through the descendant links. Representative insertions can push l_bot down,
which re-materialises the new levels from the bucket list; removals repair
descendant links bottom-up and drop levels that stop branching.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right, insort

from .core import PredecessorSet, check_width
from .word_ops import msb0


class YFastConfig:
    """Bucket sizing: target t (a power of two), split factor c, merge
    fraction gamma, and whether bucket contents stay sorted."""

    __slots__ = ("t", "c", "gamma", "mode")

    def __init__(self, t: int = 256, c: int = 2, gamma: float = 0.25,
                 mode: str = "sorted"):
        if t < 2 or t & (t - 1):
            raise ValueError("t must be a power of two, at least 2")
        if c < 2:
            raise ValueError("c must be at least 2")
        if not 0.0 < gamma <= 1.0:
            raise ValueError("gamma must be in (0, 1]")
        if mode not in ("sorted", "unsorted"):
            raise ValueError("mode must be 'sorted' or 'unsorted'")
        self.t = t
        self.c = c
        self.gamma = gamma
        self.mode = mode


class Bucket:
    """A run of keys in [rep, next rep), doubly linked in representative
    order. rep is None on the head sentinel only."""

    __slots__ = ("rep", "rep_dead", "keys", "prev", "next")

    def __init__(self, rep: int | None, keys: list[int]):
        self.rep = rep
        self.rep_dead = False
        self.keys = keys
        self.prev: Bucket | None = None
        self.next: Bucket | None = None


class LSSNode:
    """One stored trie node: which children exist, and the buckets carrying
    the smallest and largest representative below it."""

    __slots__ = ("has_left", "has_right", "desc_min", "desc_max")

    def __init__(self, bucket: Bucket):
        self.has_left = False
        self.has_right = False
        self.desc_min = bucket
        self.desc_max = bucket


class YFastTrie(PredecessorSet):
    """The full structure; see the module docstring for the moving parts."""

    __slots__ = ("width", "config", "_sorted", "_split_at", "_merge_below",
                 "head", "levels", "branching", "l_bot", "l_top", "reps",
                 "_size")

    def __init__(self, width: int = 64, config: YFastConfig | None = None):
        self.width = check_width(width)
        self.config = config if config is not None else YFastConfig()
        self._sorted = self.config.mode == "sorted"
        self._split_at = self.config.c * self.config.t
        self._merge_below = self.config.gamma * self.config.t
        self.head = Bucket(None, [])
        self.levels: list[dict[int, LSSNode]] = []
        self.branching: list[int] = []
        self.l_bot = 0
        self.l_top = 0
        self.reps = 0
        self._size = 0

    # -- bucket contents ----------------------------------------------------

    def _bucket_contains(self, bucket: Bucket, x: int) -> bool:
        keys = bucket.keys
        if self._sorted:
            i = bisect_left(keys, x)
            return i < len(keys) and keys[i] == x
        return x in keys

    def _bucket_add(self, bucket: Bucket, x: int) -> None:
        if self._sorted:
            insort(bucket.keys, x)
        else:
            bucket.keys.append(x)

    def _bucket_remove(self, bucket: Bucket, x: int) -> None:
        keys = bucket.keys
        if self._sorted:
            keys.pop(bisect_left(keys, x))
        else:
            i = keys.index(x)
            keys[i] = keys[-1]
            keys.pop()

    def _bucket_pred(self, bucket: Bucket, x: int) -> int | None:
        keys = bucket.keys
        if self._sorted:
            i = bisect_right(keys, x)
            return keys[i - 1] if i else None
        best = -1
        for v in keys:
            if best < v <= x:
                best = v
        return best if best >= 0 else None

    def _bucket_max(self, bucket: Bucket) -> int:
        return bucket.keys[-1] if self._sorted else max(bucket.keys)

    # -- the representative trie ---------------------------------------------

    def _add_rep_to_level(self, level: int, bucket: Bucket) -> None:
        rep = bucket.rep
        w = self.width
        nodes = self.levels[level]
        p = rep >> (w - level)
        node = nodes.get(p)
        if node is None:
            node = nodes[p] = LSSNode(bucket)
        else:
            if rep < node.desc_min.rep:
                node.desc_min = bucket
            if rep > node.desc_max.rep:
                node.desc_max = bucket
        if (rep >> (w - 1 - level)) & 1:
            if not node.has_right:
                node.has_right = True
                if node.has_left:
                    self.branching[level] += 1
        elif not node.has_left:
            node.has_left = True
            if node.has_right:
                self.branching[level] += 1

    def _recompute_l_top(self) -> None:
        m = self.reps
        if m == 0:
            self.l_top = 0
            return
        ell = 0
        while ell < self.width:
            nxt = ell + 1
            count = len(self.levels[nxt]) if nxt < self.l_bot else m
            if count != 1 << nxt:
                break
            ell = nxt
        self.l_top = ell

    def _insert_rep(self, bucket: Bucket) -> None:
        """Add an already-linked bucket's representative to the trie."""
        if self.reps == 0:
            self.reps = 1
            self._recompute_l_top()
            return
        w = self.width
        rep = bucket.rep
        # The deepest divergence is against a neighbour in rep order.
        lam = -1
        if bucket.prev.rep is not None:
            lam = w - 1 - msb0(rep ^ bucket.prev.rep)
        if bucket.next is not None:
            lam = max(lam, w - 1 - msb0(rep ^ bucket.next.rep))
        new_bot = lam + 1
        if new_bot > self.l_bot:
            for _ in range(self.l_bot, new_bot):
                self.levels.append({})
                self.branching.append(0)
            b = self.head.next
            while b is not None:
                if b is not bucket:
                    for level in range(self.l_bot, new_bot):
                        self._add_rep_to_level(level, b)
                b = b.next
            self.l_bot = new_bot
        for level in range(self.l_bot):
            self._add_rep_to_level(level, bucket)
        self.reps += 1
        self._recompute_l_top()

    def _remove_rep(self, bucket: Bucket) -> None:
        """Drop a still-linked bucket's representative from the trie."""
        self.reps -= 1
        if self.l_bot == 0:
            self._recompute_l_top()
            return
        w = self.width
        rep = bucket.rep
        child_died = True  # the unary path below the cut always goes
        for level in range(self.l_bot - 1, -1, -1):
            nodes = self.levels[level]
            p = rep >> (w - level)
            node = nodes[p]
            if child_died:
                if (rep >> (w - 1 - level)) & 1:
                    node.has_right = False
                    if node.has_left:
                        self.branching[level] -= 1
                else:
                    node.has_left = False
                    if node.has_right:
                        self.branching[level] -= 1
            if node.desc_min is bucket and node.desc_max is bucket:
                del nodes[p]
                child_died = True
            else:
                # Neighbours in rep order take over the descendant slots.
                if node.desc_min is bucket:
                    node.desc_min = bucket.next
                if node.desc_max is bucket:
                    node.desc_max = bucket.prev
                child_died = False
        new_bot = 0
        for level in range(self.l_bot - 1, -1, -1):
            if self.branching[level]:
                new_bot = level + 1
                break
        if new_bot < self.l_bot:
            del self.levels[new_bot:]
            del self.branching[new_bot:]
            self.l_bot = new_bot
        self._recompute_l_top()

    def _locate_bucket(self, x: int) -> Bucket:
        """The bucket whose range covers x (head when x is below all reps)."""
        if self.reps == 0:
            return self.head
        if self.reps == 1:
            only = self.head.next
            return only if only.rep <= x else self.head
        w = self.width
        levels = self.levels
        hi = self.l_bot - 1
        lo = self.l_top if self.l_top < hi else hi
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if (x >> (w - mid)) in levels[mid]:
                lo = mid
            else:
                hi = mid - 1
        node = levels[lo][x >> (w - lo)]
        c = node.desc_max if (x >> (w - 1 - lo)) & 1 else node.desc_min
        return c if c.rep <= x else c.prev

    # -- splits and merges -----------------------------------------------------

    def _split(self, bucket: Bucket) -> None:
        keys = bucket.keys if self._sorted else sorted(bucket.keys)
        cut = len(keys) >> 1
        high = keys[cut:]
        bucket.keys = keys[:cut]
        new = Bucket(high[0], high)
        new.prev = bucket
        new.next = bucket.next
        bucket.next = new
        if new.next is not None:
            new.next.prev = new
        self._insert_rep(new)

    def _merge(self, bucket: Bucket) -> None:
        partner = bucket.next if bucket.next is not None else bucket.prev
        if partner is bucket.next:
            left, right = bucket, partner
        else:
            left, right = partner, bucket
        self._remove_rep(right)
        left.next = right.next
        if right.next is not None:
            right.next.prev = left
        left.keys.extend(right.keys)  # all of right's keys sort above left's
        if len(left.keys) > self._split_at:
            self._split(left)

    # -- the predecessor-set contract ------------------------------------------

    def insert(self, x: int) -> bool:
        self._check_key(x)
        if self._size == 0:
            first = Bucket(x, [x])
            first.prev = self.head
            self.head.next = first
            self._insert_rep(first)
            self._size = 1
            return True
        bucket = self._locate_bucket(x)
        if self._bucket_contains(bucket, x):
            return False
        self._bucket_add(bucket, x)
        if bucket.rep_dead and x == bucket.rep:
            bucket.rep_dead = False
        if len(bucket.keys) > self._split_at:
            self._split(bucket)
        self._size += 1
        return True

    def delete(self, x: int) -> bool:
        self._check_key(x)
        if self._size == 0:
            return False
        bucket = self._locate_bucket(x)
        if not self._bucket_contains(bucket, x):
            return False
        self._bucket_remove(bucket, x)
        if x == bucket.rep:
            bucket.rep_dead = True
        self._size -= 1
        if bucket.rep is not None and len(bucket.keys) < self._merge_below:
            self._merge(bucket)
        return True

    def predecessor(self, x: int) -> int | None:
        self._check_key(x)
        if self._size == 0:
            return None
        bucket = self._locate_bucket(x)
        p = self._bucket_pred(bucket, x)
        if p is not None:
            return p
        prev = bucket.prev
        if prev is None or not prev.keys:
            return None
        return self._bucket_max(prev)

    def __len__(self) -> int:
        return self._size

    def __iter__(self):
        b = self.head
        while b is not None:
            yield from b.keys if self._sorted else sorted(b.keys)
            b = b.next

    # -- test support -----------------------------------------------------------

    def bucket_list(self) -> list[Bucket]:
        out = []
        b = self.head.next
        while b is not None:
            out.append(b)
            b = b.next
        return out
