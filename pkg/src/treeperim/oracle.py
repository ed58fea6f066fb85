"""Exact vertex-isoperimetric profiles: brute force, tree DP, optima and nesting.

The DP tracks three root states per subtree and size:

* ``M``: the root is a member;
* ``B``: the root is outside S but has a member child, so it is already border;
* ``C``: the root is outside S with no member child; it becomes border only if
  its parent joins S, so that charge is paid when the parent is merged.

All subtrees at one depth of a complete tree are isomorphic, so a complete
tree needs one table per level.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import kernels
from .tree import RootedTree, TreeShape
from .vset import VertexSet

INF = kernels.INF

BRUTE_FORCE_CAP = 22
ENUMERATION_CAP = 16
DP_VERTEX_BUDGET = 60_000


class OracleCapError(ValueError):
    """The requested instance is above a configured size cap."""


# -- brute force -----------------------------------------------------------


def _shape_masks(shape: TreeShape) -> list[int]:
    return shape.to_rooted().neighbor_masks()


def phi_bruteforce(shape: TreeShape | RootedTree, s: int, cap: int = BRUTE_FORCE_CAP) -> int:
    tree = shape.to_rooted() if isinstance(shape, TreeShape) else shape
    n = len(tree)
    if n > cap:
        raise OracleCapError(f"brute force limited to {cap} vertices, got {n}")
    if not 0 <= s <= n:
        raise ValueError(f"s={s} outside 0..{n}")
    masks = tree.neighbor_masks()
    best = n
    for combo in itertools.combinations(range(n), s):
        S = 0
        nb = 0
        for v in combo:
            S |= 1 << v
            nb |= masks[v]
        b = (nb & ~S).bit_count()
        if b < best:
            best = b
            if b == 0:
                break
    return best if s else 0


def _all_subset_borders(masks: Sequence[int]) -> np.ndarray:
    n = len(masks)
    N = 1 << n
    nbm = np.zeros(N, dtype=np.int64)
    for k in range(n):
        nbm[1 << k : 1 << (k + 1)] = nbm[: 1 << k] | masks[k]
    states = np.arange(N, dtype=np.int64)
    return np.bitwise_count(nbm & ~states).astype(np.int64)


def profile_bruteforce(shape: TreeShape | RootedTree, cap: int = ENUMERATION_CAP + 4) -> np.ndarray:
    """Whole profile by scanning all ``2**n`` subsets at once."""
    tree = shape.to_rooted() if isinstance(shape, TreeShape) else shape
    n = len(tree)
    if n > cap:
        raise OracleCapError(f"subset scan limited to {cap} vertices, got {n}")
    border = _all_subset_borders(tree.neighbor_masks())
    pop = np.bitwise_count(np.arange(1 << n, dtype=np.int64))
    out = np.full(n + 1, n, dtype=np.int64)
    np.minimum.at(out, pop, border)
    return out


# -- complete-tree DP ------------------------------------------------------


def _minv(*arrs: np.ndarray) -> np.ndarray:
    out = arrs[0].copy()
    for a in arrs[1:]:
        np.minimum(out, a, out=out)
    return out


def _pad(a: np.ndarray, n: int) -> np.ndarray:
    if a.size >= n:
        return a[:n]
    return np.concatenate([a, np.full(n - a.size, INF, dtype=np.int64)])


def _sat(a: np.ndarray) -> np.ndarray:
    return np.minimum(a, INF)


@dataclass
class _Level:
    M: np.ndarray
    B: np.ndarray
    C: np.ndarray
    # prefix products over the first k children, k = 0..q
    gpre: list[np.ndarray] = field(default_factory=list)
    hpre: list[np.ndarray] = field(default_factory=list)
    a1pre: list[np.ndarray] = field(default_factory=list)


class _CompleteDP:
    def __init__(self, q: int, d: int):
        self.q, self.d = q, d
        leaf = _Level(
            M=np.array([INF, 0], dtype=np.int64),
            B=np.array([INF, INF], dtype=np.int64),
            C=np.array([0, INF], dtype=np.int64),
        )
        levels: list[_Level] = [leaf]
        for _ in range(d):
            levels.append(self._lift(levels[-1]))
        levels.reverse()
        self.levels = levels

    def _lift(self, ch: _Level) -> _Level:
        q = self.q
        g = _minv(ch.M, ch.B, _sat(ch.C + 1))
        h0 = _minv(ch.B, ch.C)
        hall = _minv(ch.M, ch.B, ch.C)
        gpre = [np.zeros(1, dtype=np.int64)]
        hpre = [np.zeros(1, dtype=np.int64)]
        a1pre = [np.full(1, INF, dtype=np.int64)]
        for _ in range(q):
            gpre.append(kernels.minplus_conv(gpre[-1], g))
            a1 = _minv(kernels.minplus_conv(a1pre[-1], hall), kernels.minplus_conv(hpre[-1], ch.M))
            a1pre.append(a1)
            hpre.append(kernels.minplus_conv(hpre[-1], h0))
        size = q * (ch.M.size - 1) + 1
        M = np.concatenate([[INF], gpre[q]])
        C = _pad(hpre[q], size + 1)
        B = _sat(_pad(a1pre[q], size + 1) + 1)
        return _Level(M=M, B=B, C=C, gpre=gpre, hpre=hpre, a1pre=a1pre)

    def values(self) -> np.ndarray:
        top = self.levels[0]
        return _minv(top.M, top.B, top.C)

    # -- witness reconstruction --------------------------------------

    def witness(self, s: int) -> np.ndarray:
        shape = TreeShape(self.q, self.d)
        member = np.zeros(shape.size, dtype=bool)
        top = self.levels[0]
        state = _argmin_state((top.M, top.B, top.C), s)
        stack = [(0, 0, state, s)]
        while stack:
            i, v, st, k = stack.pop()
            stack.extend(self._expand(i, v, st, k, member))
        return member

    def _expand(self, i: int, v: int, st: str, s: int, member: np.ndarray) -> list[tuple[int, int, str, int]]:
        q = self.q
        if st == "M":
            member[v] = True
        if i == self.d:
            return []
        lv, ch = self.levels[i], self.levels[i + 1]
        kids = [q * v + 1 + j for j in range(q)]
        g = _minv(ch.M, ch.B, _sat(ch.C + 1))
        h0 = _minv(ch.B, ch.C)
        hall = _minv(ch.M, ch.B, ch.C)
        out = []
        if st == "M":
            rest = s - 1
            for k in range(q, 0, -1):
                sc = _split(lv.gpre[k - 1], g, lv.gpre[k][rest], rest)
                out.append((i + 1, kids[k - 1], _argmin_state((ch.M, ch.B, _sat(ch.C + 1)), sc), sc))
                rest -= sc
        elif st == "C":
            rest = s
            for k in range(q, 0, -1):
                sc = _split(lv.hpre[k - 1], h0, lv.hpre[k][rest], rest)
                out.append((i + 1, kids[k - 1], _argmin_state((ch.B, ch.C), sc, "BC"), sc))
                rest -= sc
        else:
            rest = s
            with_member = True
            for k in range(q, 0, -1):
                if with_member:
                    target = lv.a1pre[k][rest]
                    sc = _split(lv.a1pre[k - 1], hall, target, rest, strict=False)
                    if sc is not None:
                        out.append((i + 1, kids[k - 1], _argmin_state((ch.M, ch.B, ch.C), sc), sc))
                    else:
                        sc = _split(lv.hpre[k - 1], ch.M, target, rest)
                        out.append((i + 1, kids[k - 1], "M", sc))
                        with_member = False
                else:
                    sc = _split(lv.hpre[k - 1], h0, lv.hpre[k][rest], rest)
                    out.append((i + 1, kids[k - 1], _argmin_state((ch.B, ch.C), sc, "BC"), sc))
                rest -= sc
        return out


def _split(prefix: np.ndarray, last: np.ndarray, target: int, s: int, strict: bool = True) -> int | None:
    lo = max(0, s - (prefix.size - 1))
    hi = min(s, last.size - 1)
    for sc in range(lo, hi + 1):
        a, b = prefix[s - sc], last[sc]
        if a < INF and b < INF and a + b == target:
            return sc
    if strict:
        raise AssertionError("DP reconstruction failed")
    return None


def _argmin_state(arrs: tuple[np.ndarray, ...], s: int, names: str = "MBC") -> str:
    vals = [a[s] if s < a.size else INF for a in arrs]
    return names[int(np.argmin(vals))]


@lru_cache(maxsize=32)
def _complete_dp(q: int, d: int) -> _CompleteDP:
    return _CompleteDP(q, d)


# -- public API ------------------------------------------------------------


@dataclass(frozen=True)
class ProfileTable:
    shape: TreeShape
    values: np.ndarray
    witnesses: tuple[VertexSet, ...] | None = None

    def __len__(self) -> int:
        return self.values.size

    def witness(self, s: int) -> VertexSet:
        if self.witnesses is not None:
            return self.witnesses[s]
        return dp_witness(self.shape, s)

    def to_csv(self, with_witness: bool = False) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "phi", "witness"] if with_witness else ["s", "phi"])
        for s, val in enumerate(self.values.tolist()):
            if with_witness:
                # space-separated ids keep the column free of commas and quotes
                w.writerow([s, val, " ".join(map(str, self.witness(s).members()))])
            else:
                w.writerow([s, val])
        return buf.getvalue()


@dataclass(frozen=True)
class PeakReport:
    shape: TreeShape
    peak: int
    argmax_s: list[int]


def _check_budget(shape: TreeShape, budget: int) -> None:
    if shape.size > budget:
        raise OracleCapError(f"profile DP limited to {budget} vertices, got {shape.size}")


def phi_profile_dp(shape: TreeShape, want_witnesses: bool = False, budget: int = DP_VERTEX_BUDGET) -> ProfileTable:
    _check_budget(shape, budget)
    dp = _complete_dp(shape.q, shape.d)
    values = dp.values()
    values.flags.writeable = False
    wit = None
    if want_witnesses:
        wit = tuple(VertexSet(shape, dp.witness(s)) for s in range(shape.size + 1))
    return ProfileTable(shape, values, wit)


def dp_witness(shape: TreeShape, s: int, budget: int = DP_VERTEX_BUDGET) -> VertexSet:
    _check_budget(shape, budget)
    if not 0 <= s <= shape.size:
        raise ValueError(f"s={s} outside 0..{shape.size}")
    return VertexSet(shape, _complete_dp(shape.q, shape.d).witness(s))


def phi_peak(shape: TreeShape, budget: int = DP_VERTEX_BUDGET) -> PeakReport:
    vals = phi_profile_dp(shape, budget=budget).values
    peak = int(vals.max())
    return PeakReport(shape, peak, np.flatnonzero(vals == peak).tolist())


def phi_total(shape: TreeShape) -> tuple[int, Fraction]:
    vals = phi_profile_dp(shape).values.tolist()
    return sum(vals), sum((Fraction(v, s) for s, v in enumerate(vals) if s), Fraction(0))


# -- general rooted trees --------------------------------------------------


def profile_rooted(tree: RootedTree, forced_in: Sequence[int] | None = None) -> np.ndarray:
    """Profile of an arbitrary rooted tree; entry ``s`` is INF when infeasible.

    Vertices in ``forced_in`` must belong to every counted set.
    """
    forced = np.zeros(len(tree), dtype=bool)
    if forced_in is not None:
        forced[list(forced_in)] = True
    tabs: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
    for v in reversed(tree.bfs_order):
        gacc = np.zeros(1, dtype=np.int64)
        hacc = np.zeros(1, dtype=np.int64)
        a1 = np.full(1, INF, dtype=np.int64)
        for c in tree.children[v]:
            M, B, C = tabs.pop(c)
            h0 = _minv(B, C)
            a1 = _minv(kernels.minplus_conv(a1, _minv(M, B, C)), kernels.minplus_conv(hacc, M))
            gacc = kernels.minplus_conv(gacc, _minv(M, B, _sat(C + 1)))
            hacc = kernels.minplus_conv(hacc, h0)
        size = gacc.size
        M = np.concatenate([[INF], gacc])
        if forced[v]:
            B = np.full(size + 1, INF, dtype=np.int64)
            C = B.copy()
        else:
            B = _sat(_pad(a1, size + 1) + 1)
            C = _pad(hacc, size + 1)
        tabs[v] = (M, B, C)
    M, B, C = tabs[tree.root]
    return _minv(M, B, C)


def peak_rooted(tree: RootedTree) -> int:
    return int(profile_rooted(tree).max())


# -- optima and nesting ----------------------------------------------------


def _optima_masks(shape: TreeShape) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = shape.size
    if n > ENUMERATION_CAP:
        raise OracleCapError(f"enumeration limited to {ENUMERATION_CAP} vertices, got {n}")
    border = _all_subset_borders(_shape_masks(shape))
    states = np.arange(1 << n, dtype=np.int64)
    pop = np.bitwise_count(states).astype(np.int64)
    best = np.full(n + 1, n, dtype=np.int64)
    np.minimum.at(best, pop, border)
    return states, pop, border == best[pop]


def _mask_to_set(shape: TreeShape, mask: int) -> VertexSet:
    return VertexSet.from_members(shape, [v for v in range(shape.size) if mask >> v & 1])


def enumerate_optima(shape: TreeShape, s: int) -> list[VertexSet]:
    if not 0 <= s <= shape.size:
        raise ValueError(f"s={s} outside 0..{shape.size}")
    states, pop, opt = _optima_masks(shape)
    return [_mask_to_set(shape, int(m)) for m in states[opt & (pop == s)]]


@dataclass(frozen=True)
class NestingReport:
    shape: TreeShape
    optima_counts: list[int]
    # nested[s]: some optimum at s lies inside some optimum at s+1
    nested: list[bool]
    chain_exists: bool
    chain_break: int | None

    def to_dict(self) -> dict:
        return {
            "q": self.shape.q,
            "d": self.shape.d,
            "optima_counts": self.optima_counts,
            "nested": self.nested,
            "chain_exists": self.chain_exists,
            "chain_break": self.chain_break,
        }


def _grow(masks: np.ndarray, n: int) -> np.ndarray:
    if not masks.size:
        return masks
    ext = [masks[(masks >> v & 1) == 0] | (1 << v) for v in range(n)]
    return np.unique(np.concatenate(ext))


def nesting_report(shape: TreeShape) -> NestingReport:
    n = shape.size
    states, pop, opt = _optima_masks(shape)
    layers = [states[opt & (pop == s)] for s in range(n + 1)]
    nested = [bool(np.isin(_grow(layers[s], n), layers[s + 1]).any()) for s in range(n)]
    chain = layers[0]
    chain_break = None
    for s in range(n):
        chain = layers[s + 1][np.isin(layers[s + 1], _grow(chain, n))]
        if not chain.size:
            chain_break = s
            break
    return NestingReport(shape, [int(x.size) for x in layers], nested, chain_break is None, chain_break)
