"""Vertex subsets of a complete tree, their vertex border, and left-ordering."""

from __future__ import annotations

import json
from typing import Iterable

import numpy as np

from .tree import TreeShape


class VertexSet:
    """An immutable subset of ``V(T)`` backed by a boolean membership array."""

    __slots__ = ("shape", "_member", "_levels")

    def __init__(self, shape: TreeShape, member: np.ndarray):
        member = np.asarray(member, dtype=bool)
        if member.shape != (shape.size,):
            raise ValueError(f"membership array has shape {member.shape}, expected ({shape.size},)")
        member = member.copy()
        member.flags.writeable = False
        self.shape = shape
        self._member = member
        self._levels: tuple[int, ...] | None = None

    @classmethod
    def empty(cls, shape: TreeShape) -> "VertexSet":
        return cls(shape, np.zeros(shape.size, dtype=bool))

    @classmethod
    def full(cls, shape: TreeShape) -> "VertexSet":
        return cls(shape, np.ones(shape.size, dtype=bool))

    @classmethod
    def from_members(cls, shape: TreeShape, members: Iterable[int]) -> "VertexSet":
        member = np.zeros(shape.size, dtype=bool)
        idx = np.fromiter(members, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= shape.size):
            raise IndexError(f"member outside 0..{shape.size - 1}")
        member[idx] = True
        return cls(shape, member)

    @classmethod
    def random(cls, shape: TreeShape, rng: np.random.Generator, size: int | None = None) -> "VertexSet":
        if size is None:
            size = int(rng.integers(0, shape.size + 1))
        picks = rng.choice(shape.size, size=size, replace=False)
        return cls.from_members(shape, picks)

    @property
    def member(self) -> np.ndarray:
        return self._member

    def __len__(self) -> int:
        return int(self._member.sum())

    def __contains__(self, v: int) -> bool:
        return bool(self._member[v])

    def __iter__(self):
        return iter(self.members())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VertexSet):
            return NotImplemented
        self._same_shape(other)
        return bool(np.array_equal(self._member, other._member))

    def __hash__(self) -> int:
        return hash((self.shape.q, self.shape.d, self._member.tobytes()))

    def __repr__(self) -> str:
        return f"VertexSet(q={self.shape.q}, d={self.shape.d}, members={self.members()})"

    def _same_shape(self, other: "VertexSet") -> None:
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def members(self) -> list[int]:
        return np.flatnonzero(self._member).tolist()

    def level_counts(self) -> tuple[int, ...]:
        if self._levels is None:
            st = self.shape.level_start
            self._levels = tuple(int(self._member[st[i] : st[i + 1]].sum()) for i in range(self.shape.d + 1))
        return self._levels

    def issubset(self, other: "VertexSet") -> bool:
        self._same_shape(other)
        return not np.any(self._member & ~other._member)

    def with_changes(self, remove: Iterable[int] = (), add: Iterable[int] = ()) -> "VertexSet":
        m = self._member.copy()
        m[list(remove)] = False
        m[list(add)] = True
        return VertexSet(self.shape, m)

    def to_json(self) -> str:
        return json.dumps({"q": self.shape.q, "d": self.shape.d, "members": self.members()})

    @classmethod
    def from_json(cls, text: str) -> "VertexSet":
        obj = json.loads(text)
        return cls.from_members(TreeShape(int(obj["q"]), int(obj["d"])), obj["members"])


def neighbor_hits(shape: TreeShape, member: np.ndarray) -> np.ndarray:
    """Boolean array: vertex has at least one neighbour in ``member``."""
    q, ni = shape.q, shape.n_internal
    hit = np.zeros(shape.size, dtype=bool)
    if ni:
        hit[:ni] = member[1:].reshape(ni, q).any(axis=1)
        hit[1:] |= np.repeat(member[:ni], q)
    return hit


def boundary_mask(shape: TreeShape, member: np.ndarray) -> np.ndarray:
    return neighbor_hits(shape, member) & ~member


def boundary_size(shape: TreeShape, member: np.ndarray) -> int:
    return int(np.count_nonzero(boundary_mask(shape, member)))


def boundary(S: VertexSet) -> VertexSet:
    return VertexSet(S.shape, boundary_mask(S.shape, S.member))


def level_counts(S: VertexSet) -> tuple[int, ...]:
    return S.level_counts()


def children_hit(shape: TreeShape, member: np.ndarray) -> np.ndarray:
    """Per-vertex flag: some child is a member (always False for leaves)."""
    out = np.zeros(shape.size, dtype=bool)
    ni = shape.n_internal
    if ni:
        out[:ni] = member[1:].reshape(ni, shape.q).any(axis=1)
    return out


def first_swappable(shape: TreeShape, member: np.ndarray) -> tuple[int, int] | None:
    """Left-most swappable pair on the first level that is not left-ordered.

    Within that level the pair with the smallest ``v`` wins, then the smallest ``u``.
    """
    kid = children_hit(shape, member)
    for i in range(shape.d + 1):
        lo, hi = shape.level_start[i], shape.level_start[i + 1]
        m = member[lo:hi]
        out = ~m
        cond2_u = out & ~kid[lo:hi]
        cond2_v = out & kid[lo:hi]
        # u for condition (1): any non-member; for (2): non-member with no member child.
        first_out = _first_true_before(out)
        first_clean = _first_true_before(cond2_u)
        cand1 = np.flatnonzero(m & (first_out >= 0))
        cand2 = np.flatnonzero(cond2_v & (first_clean >= 0))
        best = None
        if cand1.size:
            v = int(cand1[0])
            best = (v, int(first_out[v]))
        if cand2.size:
            v = int(cand2[0])
            pair = (v, int(first_clean[v]))
            if best is None or pair < best:
                best = pair
        if best is not None:
            v, u = best
            return lo + u, lo + v
    return None


def _first_true_before(flags: np.ndarray) -> np.ndarray:
    """For each position j, index of the first True strictly before j, else -1."""
    n = flags.size
    out = np.full(n, -1, dtype=np.int64)
    hits = np.flatnonzero(flags)
    if hits.size:
        first = int(hits[0])
        out[first + 1 :] = first
    return out


def is_left_ordered(S: VertexSet) -> tuple[bool, tuple[int, int] | None]:
    pair = first_swappable(S.shape, S.member)
    return pair is None, pair
