"""Complete q-ary trees addressed by breadth-first index, plus a plain rooted-tree container.

Vertices of a complete tree are never stored. Vertex ``v`` has children
``q*v+1 .. q*v+q`` and parent ``(v-1)//q``; within a level, index order is
left-to-right order.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

# Largest shape we allow; keeps membership arrays and index arithmetic in int64.
MAX_VERTICES = 2**40


def geometric_size(q: int, depth: int) -> int:
    """Vertex count of a complete q-ary tree of the given depth."""
    return (q ** (depth + 1) - 1) // (q - 1)


@dataclass(frozen=True)
class TreeShape:
    q: int
    d: int
    level_start: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.q, int) or self.q < 2:
            raise ValueError(f"branching factor must be an integer >= 2, got {self.q!r}")
        if not isinstance(self.d, int) or self.d < 0:
            raise ValueError(f"depth must be an integer >= 0, got {self.d!r}")
        n = geometric_size(self.q, self.d)
        if n > MAX_VERTICES or n > sys.maxsize:
            raise OverflowError(f"tree ({self.q},{self.d}) has {n} vertices; limit is {MAX_VERTICES}")
        starts = [0]
        for i in range(self.d + 1):
            starts.append(starts[-1] + self.q**i)
        object.__setattr__(self, "level_start", tuple(starts))

    @property
    def size(self) -> int:
        return self.level_start[-1]

    @property
    def n_internal(self) -> int:
        """Number of non-leaf vertices; they occupy indices ``0 .. n_internal-1``."""
        return self.level_start[self.d]

    def level_size(self, i: int) -> int:
        return self.q**i

    def level_range(self, i: int) -> range:
        return range(self.level_start[i], self.level_start[i + 1])

    def t(self, i: int) -> int:
        """Size of the subtree hanging from any level-``i`` vertex."""
        if not 0 <= i <= self.d:
            raise ValueError(f"level {i} outside 0..{self.d}")
        return geometric_size(self.q, self.d - i)

    def check(self, v: int) -> None:
        if not 0 <= v < self.size:
            raise IndexError(f"vertex {v} not in tree ({self.q},{self.d}) of size {self.size}")

    def level(self, v: int) -> int:
        self.check(v)
        lvl = 0
        while v >= self.level_start[lvl + 1]:
            lvl += 1
        return lvl

    def parent(self, v: int) -> int | None:
        self.check(v)
        return None if v == 0 else (v - 1) // self.q

    def children(self, v: int) -> list[int]:
        self.check(v)
        if v >= self.n_internal:
            return []
        first = self.q * v + 1
        return list(range(first, first + self.q))

    def child(self, v: int, j: int) -> int:
        """The ``j``-th child of ``v``, 1-based as in ``u^(j)``."""
        if not 1 <= j <= self.q:
            raise ValueError(f"child index {j} outside 1..{self.q}")
        kids = self.children(v)
        if not kids:
            raise ValueError(f"vertex {v} is a leaf")
        return kids[j - 1]

    def is_leaf(self, v: int) -> bool:
        self.check(v)
        return v >= self.n_internal

    def desc_blocks(self, v: int) -> list[tuple[int, int]]:
        """Descendants of ``v`` as contiguous ``(start, length)`` blocks, one per level."""
        lvl = self.level(v)
        blocks = []
        for j in range(self.d - lvl + 1):
            width = self.q**j
            blocks.append((v * width + (width - 1) // (self.q - 1), width))
        return blocks

    def desc_array(self, v: int) -> np.ndarray:
        return np.concatenate([np.arange(a, a + w, dtype=np.int64) for a, w in self.desc_blocks(v)])

    def levels_array(self) -> np.ndarray:
        out = np.empty(self.size, dtype=np.int64)
        for i in range(self.d + 1):
            out[self.level_start[i] : self.level_start[i + 1]] = i
        return out

    def to_rooted(self) -> "RootedTree":
        parent = np.empty(self.size, dtype=np.int64)
        parent[0] = -1
        parent[1:] = (np.arange(1, self.size) - 1) // self.q
        return RootedTree(parent)


class IndexInfo(NamedTuple):
    level: int
    parent: int | None
    children: list[int]
    is_leaf: bool


def make_tree(q: int, d: int) -> TreeShape:
    return TreeShape(q, d)


def t_of(shape: TreeShape, i: int) -> int:
    return shape.t(i)


def index_queries(shape: TreeShape, v: int) -> IndexInfo:
    return IndexInfo(shape.level(v), shape.parent(v), shape.children(v), shape.is_leaf(v))


def descendants(shape: TreeShape, v: int) -> list[int]:
    return shape.desc_array(v).tolist()


def subtree_sizes_by_level(shape: TreeShape) -> list[int]:
    return [shape.t(i) for i in range(shape.d + 1)]


class RootedTree:
    """A rooted tree stored as a parent array; the root's parent is ``-1``."""

    def __init__(self, parent: Sequence[int] | np.ndarray):
        par = np.asarray(parent, dtype=np.int64)
        if par.ndim != 1 or par.size == 0:
            raise ValueError("parent array must be a non-empty 1-d sequence")
        roots = np.flatnonzero(par < 0)
        if roots.size != 1:
            raise ValueError(f"expected exactly one root, found {roots.size}")
        n = par.size
        if np.any(par >= n):
            raise ValueError("parent index out of range")
        self.parent = par
        self.n = n
        self.root = int(roots[0])
        kids: list[list[int]] = [[] for _ in range(n)]
        for v, p in enumerate(par.tolist()):
            if p >= 0:
                kids[p].append(v)
        self.children = kids
        order = [self.root]
        for v in order:
            order.extend(kids[v])
        if len(order) != n:
            raise ValueError("parent pointers contain a cycle or a detached vertex")
        self.bfs_order = order

    def __len__(self) -> int:
        return self.n

    def neighbors(self, v: int) -> list[int]:
        p = int(self.parent[v])
        return self.children[v] + ([p] if p >= 0 else [])

    def neighbor_masks(self) -> list[int]:
        masks = [0] * self.n
        for v, p in enumerate(self.parent.tolist()):
            if p >= 0:
                masks[v] |= 1 << p
                masks[p] |= 1 << v
        return masks

    def edges(self) -> list[tuple[int, int]]:
        return [(int(p), v) for v, p in enumerate(self.parent.tolist()) if p >= 0]

    @classmethod
    def path(cls, n: int) -> "RootedTree":
        return cls([-1] + list(range(n - 1)))

    @classmethod
    def star(cls, leaves: int) -> "RootedTree":
        return cls([-1] + [0] * leaves)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "RootedTree":
        """Random recursive tree: vertex ``i`` attaches to a uniform earlier vertex."""
        parent = [-1] + [int(rng.integers(0, i)) for i in range(1, n)]
        return cls(parent)
