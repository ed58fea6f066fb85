"""Vertex separation, tree pathwidth, optimal layouts for complete trees, and
the separation/peak gap."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .bounds import pathwidth_formula
from .oracle import phi_peak
from .tree import RootedTree, TreeShape
from .witness import postorder

VS_EXACT_CAP = 20


@dataclass(frozen=True)
class Layout:
    """A linear layout stored as the vertex ids in rank order."""

    order: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", tuple(int(v) for v in self.order))
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("layout is not a bijection onto the vertex set")

    def __len__(self) -> int:
        return len(self.order)

    @property
    def ranks(self) -> list[int]:
        """``ranks[v]`` is the 1-based position of ``v``."""
        r = [0] * len(self.order)
        for i, v in enumerate(self.order, start=1):
            r[v] = i
        return r

    @classmethod
    def from_ranks(cls, ranks: Sequence[int]) -> "Layout":
        n = len(ranks)
        if sorted(ranks) != list(range(1, n + 1)):
            raise ValueError("ranks must be a permutation of 1..n")
        order = [0] * n
        for v, r in enumerate(ranks):
            order[r - 1] = v
        return cls(tuple(order))

    def to_json(self) -> str:
        return json.dumps(list(self.order))

    @classmethod
    def from_json(cls, text: str) -> "Layout":
        return cls(tuple(json.loads(text)))


def _as_rooted(tree: RootedTree | TreeShape) -> RootedTree:
    return tree.to_rooted() if isinstance(tree, TreeShape) else tree


def prefix_borders(tree: RootedTree | TreeShape, L: Layout) -> list[int]:
    """Border size of every prefix, in rank order."""
    t = _as_rooted(tree)
    if len(L) != t.n:
        raise ValueError(f"layout has {len(L)} vertices, tree has {t.n}")
    nbrs = [t.neighbors(v) for v in range(t.n)]
    inside = [False] * t.n
    hits = [0] * t.n
    border = 0
    out = []
    for v in L.order:
        if hits[v]:
            border -= 1
        inside[v] = True
        for w in nbrs[v]:
            if not inside[w] and hits[w] == 0:
                border += 1
            hits[w] += 1
        out.append(border)
    return out


def vs_of_layout(tree: RootedTree | TreeShape, L: Layout) -> int:
    return max(prefix_borders(tree, L), default=0)


def vs_exact(tree: RootedTree | TreeShape, cap: int = VS_EXACT_CAP) -> int:
    t = _as_rooted(tree)
    if t.n > cap:
        raise ValueError(f"vs_exact is limited to {cap} vertices, got {t.n}")
    return kernels.vs_subset_dp(np.array(t.neighbor_masks(), dtype=np.int64))


# A label is a strictly decreasing list of (value, critical) pairs. The head is
# the separation number of the rooted subtree; a critical head means some vertex
# has two children whose subtrees attain that value, and the tail is the label
# of what remains once that vertex's subtree is cut away.
Label = list[tuple[int, bool]]


def _combine(kids: list[Label]) -> Label:
    if not kids:
        return [(0, False)]
    k = max(lab[0][0] for lab in kids)
    if k == 0:
        # a star: any edge already costs one
        return [(1, False)]
    top = [i for i, lab in enumerate(kids) if lab[0][0] == k]
    if len(top) >= 3:
        return [(k + 1, False)]
    if len(top) == 2:
        if any(kids[i][0][1] for i in top):
            return [(k + 1, False)]
        return [(k, True)]
    i = top[0]
    if not kids[i][0][1]:
        return [(k, False)]
    rest_kids = [lab for j, lab in enumerate(kids) if j != i]
    if len(kids[i]) > 1:
        rest_kids.append(kids[i][1:])
    rest = _combine(rest_kids)
    if rest[0][0] >= k:
        return [(k + 1, False)]
    return [(k, True)] + rest


def tree_pathwidth(tree: RootedTree | TreeShape) -> int:
    t = _as_rooted(tree)
    labels: list[Label | None] = [None] * t.n
    for v in reversed(t.bfs_order):
        labels[v] = _combine([labels[c] for c in t.children[v]])  # type: ignore[misc]
        for c in t.children[v]:
            labels[c] = None
    return labels[t.root][0][0]  # type: ignore[index]


def _binary_layout(shape: TreeShape, v: int, out: list[int]) -> None:
    if shape.is_leaf(v):
        out.append(v)
        return
    a, b = shape.children(v)
    if shape.is_leaf(a):
        out.extend((a, v, b))
        return
    # each grandchild subtree sees at most one extra border vertex: its parent
    for g in shape.children(a):
        _binary_layout(shape, g, out)
    out.extend((a, v))
    for g in shape.children(b):
        _binary_layout(shape, g, out)
    out.append(b)


def optimal_layout(shape: TreeShape) -> Layout:
    if shape.q == 2:
        out: list[int] = []
        _binary_layout(shape, 0, out)
        return Layout(tuple(out))
    # post-order: every prefix border is a subtree-local border plus one parent
    return Layout(tuple(postorder(shape)))


@dataclass(frozen=True)
class GapReport:
    q: int
    d: int
    vs: int
    peak: int

    @property
    def gap(self) -> int:
        return self.vs - self.peak

    def row(self) -> list[int]:
        return [self.q, self.d, self.vs, self.peak, self.gap]


GAP_HEADER = ["q", "d", "vs", "peak", "gap"]


def gap_report(shape: TreeShape) -> GapReport:
    return GapReport(shape.q, shape.d, pathwidth_formula(shape.q, shape.d), phi_peak(shape).peak)


def gaps_csv(reports: Iterable[GapReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(GAP_HEADER)
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()
