"""In-memory B-tree ordered set with configurable degree and node search.

Nodes have at most B children and up to B-1 keys held in a fixed-capacity
array('Q') (one exact-size buffer per node, no growth slack). Insertion
splits full nodes on the way down; deletion uses the preemptive single-pass
variant, topping a child up to at least the minimum occupancy before
descending into it, so neither operation ever revisits a node.

The per-node key search is pluggable: linear scan, binary search, or (for
fusion trees) a packed-word matcher mirroring the node's keys. A strategy
with ``mirrors = True`` gets a callback for every key the engine adds to or
removes from a node, plus a bulk callback after splits and merges.
"""

from __future__ import annotations

from array import array
from bisect import bisect_right

from .core import PredecessorSet, check_width

SUPPORTED_DEGREES = (8, 16, 64, 128, 256)


class _Node:
    __slots__ = ("keys", "nkeys", "children", "aux")

    def __init__(self, capacity: int, leaf: bool):
        self.keys = array("Q", bytes(8 * capacity))
        self.nkeys = 0
        self.children: list[_Node] | None = None if leaf else []
        self.aux = None  # owned by mirroring strategies

    @property
    def leaf(self) -> bool:
        return self.children is None


class LinearNodeSearch:
    mirrors = False

    @staticmethod
    def rank(node: _Node, x: int) -> int:
        keys = node.keys
        n = node.nkeys
        i = 0
        while i < n and keys[i] <= x:
            i += 1
        return i


class BinaryNodeSearch:
    mirrors = False

    @staticmethod
    def rank(node: _Node, x: int) -> int:
        return bisect_right(node.keys, x, 0, node.nkeys)


class BTreeEngine:
    """Key storage and rebalancing; search behaviour comes from the strategy."""

    def __init__(self, capacity: int, strategy):
        if capacity < 4 or capacity % 2:
            raise ValueError("degree must be even and at least 4")
        self.B = capacity
        self.t = capacity // 2  # min child count; non-root nodes keep >= t-1 keys
        self.strategy = strategy
        self._mirrors = strategy.mirrors
        self.root = self._new_node(leaf=True)
        self.size = 0

    # -- node plumbing -------------------------------------------------------

    def _new_node(self, leaf: bool) -> _Node:
        node = _Node(self.B - 1, leaf)
        if self._mirrors:
            self.strategy.attach(node)
        return node

    def _key_in(self, node: _Node, idx: int, key: int) -> None:
        n = node.nkeys
        node.keys[idx + 1 : n + 1] = node.keys[idx:n]
        node.keys[idx] = key
        node.nkeys = n + 1
        if self._mirrors:
            self.strategy.on_insert(node, key)

    def _key_out(self, node: _Node, idx: int) -> int:
        n = node.nkeys
        key = node.keys[idx]
        node.keys[idx : n - 1] = node.keys[idx + 1 : n]
        node.nkeys = n - 1
        if self._mirrors:
            self.strategy.on_delete(node, key)
        return key

    def _key_swap(self, node: _Node, idx: int, key: int) -> None:
        old = node.keys[idx]
        node.keys[idx] = key
        if self._mirrors:
            self.strategy.on_delete(node, old)
            self.strategy.on_insert(node, key)

    def _bulk(self, *nodes: _Node) -> None:
        if self._mirrors:
            for node in nodes:
                self.strategy.on_bulk(node)

    # -- rebalancing -----------------------------------------------------------

    def _split_child(self, parent: _Node, ci: int) -> None:
        t = self.t
        child = parent.children[ci]
        right = self._new_node(leaf=child.leaf)
        sep = child.keys[t - 1]
        right.keys[0 : t - 1] = child.keys[t : 2 * t - 1]
        right.nkeys = t - 1
        child.nkeys = t - 1
        if not child.leaf:
            right.children = child.children[t:]
            del child.children[t:]
        parent.children.insert(ci + 1, right)
        self._key_in(parent, ci, sep)
        self._bulk(child, right)

    def _merge_children(self, parent: _Node, ki: int) -> _Node:
        """Fold separator ki and its right child into the left child."""
        left = parent.children[ki]
        right = parent.children[ki + 1]
        sep = self._key_out(parent, ki)
        n = left.nkeys
        left.keys[n] = sep
        left.keys[n + 1 : n + 1 + right.nkeys] = right.keys[0 : right.nkeys]
        left.nkeys = n + 1 + right.nkeys
        if not left.leaf:
            left.children.extend(right.children)
        del parent.children[ki + 1]
        self._bulk(left)
        return left

    def _ensure_child(self, node: _Node, ci: int) -> _Node:
        """Make children[ci] safe to descend into (>= t keys), borrowing from
        a sibling or merging with one when it sits at the minimum."""
        t = self.t
        child = node.children[ci]
        if child.nkeys >= t:
            return child
        if ci > 0 and node.children[ci - 1].nkeys >= t:
            left = node.children[ci - 1]
            moved = left.keys[left.nkeys - 1]
            left.nkeys -= 1
            if self._mirrors:
                self.strategy.on_delete(left, moved)
            sep = node.keys[ci - 1]
            self._key_swap(node, ci - 1, moved)
            self._key_in(child, 0, sep)
            if not child.leaf:
                child.children.insert(0, left.children.pop())
            return child
        if ci < node.nkeys and node.children[ci + 1].nkeys >= t:
            right = node.children[ci + 1]
            sep = node.keys[ci]
            moved = self._key_out(right, 0)
            self._key_swap(node, ci, moved)
            self._key_in(child, child.nkeys, sep)
            if not child.leaf:
                child.children.append(right.children.pop(0))
            return child
        if ci > 0:
            return self._merge_children(node, ci - 1)
        return self._merge_children(node, ci)

    def _collapse_root(self) -> None:
        if self.root.nkeys == 0 and not self.root.leaf:
            self.root = self.root.children[0]

    # -- operations ------------------------------------------------------------

    def insert(self, x: int) -> bool:
        strategy = self.strategy
        if self.root.nkeys == self.B - 1:
            old = self.root
            self.root = self._new_node(leaf=False)
            self.root.children.append(old)
            self._split_child(self.root, 0)
        node = self.root
        while True:
            r = strategy.rank(node, x)
            if r > 0 and node.keys[r - 1] == x:
                return False
            if node.leaf:
                self._key_in(node, r, x)
                self.size += 1
                return True
            child = node.children[r]
            if child.nkeys == self.B - 1:
                self._split_child(node, r)
                sep = node.keys[r]
                if sep == x:
                    return False
                child = node.children[r + 1] if x > sep else node.children[r]
            node = child

    def delete(self, x: int) -> bool:
        strategy = self.strategy
        node = self.root
        while True:
            r = strategy.rank(node, x)
            present = r > 0 and node.keys[r - 1] == x
            if node.leaf:
                if not present:
                    return False
                self._key_out(node, r - 1)
                self.size -= 1
                return True
            if present:
                ki = r - 1
                left, right = node.children[ki], node.children[ki + 1]
                if left.nkeys >= self.t:
                    self._key_swap(node, ki, self._delete_max(left))
                    self.size -= 1
                    return True
                if right.nkeys >= self.t:
                    self._key_swap(node, ki, self._delete_min(right))
                    self.size -= 1
                    return True
                node = self._merge_children(node, ki)
            else:
                node = self._ensure_child(node, r)
            self._collapse_root()

    def _delete_max(self, node: _Node) -> int:
        while not node.leaf:
            node = self._ensure_child(node, len(node.children) - 1)
        key = node.keys[node.nkeys - 1]
        node.nkeys -= 1
        if self._mirrors:
            self.strategy.on_delete(node, key)
        return key

    def _delete_min(self, node: _Node) -> int:
        while not node.leaf:
            node = self._ensure_child(node, 0)
        return self._key_out(node, 0)

    def predecessor(self, x: int) -> int | None:
        strategy = self.strategy
        node = self.root
        best = None
        while True:
            r = strategy.rank(node, x)
            if r > 0:
                best = node.keys[r - 1]
                if best == x:
                    return x
            if node.leaf:
                return best
            node = node.children[r]

    # -- test support ------------------------------------------------------------

    def audit(self) -> list[int]:
        """Verify structural invariants; returns all keys in ascending order."""
        out: list[int] = []
        leaf_depths: set[int] = set()

        def check(node: _Node, lo: int | None, hi: int | None, depth: int) -> None:
            assert node.nkeys <= self.B - 1, "node over capacity"
            if node is not self.root:
                assert node.nkeys >= self.t - 1, "node under minimum occupancy"
            keys = node.keys[: node.nkeys].tolist()
            assert keys == sorted(set(keys)), "node keys not strictly ascending"
            if keys:
                assert lo is None or keys[0] > lo, "key at or below subtree bound"
                assert hi is None or keys[-1] < hi, "key at or above subtree bound"
            if self._mirrors and node.aux is not None:
                assert list(node.aux.keys) == keys, "search mirror out of sync"
            if node.leaf:
                leaf_depths.add(depth)
                out.extend(keys)
                return
            assert len(node.children) == node.nkeys + 1, "child count mismatch"
            bounds = [lo] + keys + [hi]
            for i, child in enumerate(node.children):
                check(child, bounds[i], bounds[i + 1], depth + 1)
                if i < node.nkeys:
                    out.append(keys[i])

        check(self.root, None, None, 0)
        assert len(leaf_depths) <= 1, "leaves at differing depths"
        assert len(out) == self.size, "size counter out of sync"
        return out


class BTreeSet(PredecessorSet):
    """Plain B-tree ordered set, the comparison baseline for everything else."""

    __slots__ = ("width", "B", "node_search", "_engine")

    def __init__(self, width: int = 64, B: int = 64, node_search: str = "binary"):
        self.width = check_width(width)
        if B not in SUPPORTED_DEGREES:
            raise ValueError(f"unsupported degree {B}; expected one of {SUPPORTED_DEGREES}")
        self.B = B
        self.node_search = node_search
        if node_search == "linear":
            strategy = LinearNodeSearch()
        elif node_search == "binary":
            strategy = BinaryNodeSearch()
        else:
            raise ValueError(f"unknown node search {node_search!r}")
        self._engine = BTreeEngine(B, strategy)

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
