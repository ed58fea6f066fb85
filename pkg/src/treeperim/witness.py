"""Constructive extremal sets: critical cardinalities, post-order prefixes, the
path construction for q in {3, 4}, and local structure probes."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .bounds import ilog_ceil, ilog_floor
from .compress import subtree_member_counts
from .oracle import dp_witness, phi_profile_dp, profile_rooted
from .tree import TreeShape, geometric_size
from .vset import VertexSet, boundary_mask, boundary_size


# -- critical cardinalities ------------------------------------------------


@dataclass(frozen=True)
class CriticalSizes:
    q: int
    d: int
    size: int
    regime: str
    D: int | None = None


def _t(q: int, d: int, i: int) -> int:
    return geometric_size(q, d - i)


def critical_size(q: int, d: int) -> CriticalSizes:
    if q < 2 or d < 1:
        raise ValueError("need q >= 2 and d >= 1")
    if q >= 5:
        return CriticalSizes(q, d, sum(2 * _t(q, d, i) for i in range(1, d + 1)), "q>=5")
    if q in (3, 4):
        D = d - ilog_ceil(2 * d, q)
        if D < 1:
            raise ValueError(f"d={d} too small for q={q}: D={D}")
        return CriticalSizes(q, d, sum(_t(q, d, i) - 1 for i in range(1, D + 1)), "q=3,4", D)
    D = (d - ilog_ceil(3 * d, 2)) // 2
    if D < 1:
        raise ValueError(f"d={d} too small for q=2: D={D}")
    return CriticalSizes(q, d, sum(_t(q, d, 2 * i) - 1 for i in range(1, D + 1)), "q=2", D)


# -- post-order prefixes ---------------------------------------------------


def postorder(shape: TreeShape) -> list[int]:
    out: list[int] = []
    stack: list[tuple[int, bool]] = [(0, False)]
    while stack:
        v, done = stack.pop()
        if done or shape.is_leaf(v):
            out.append(v)
            continue
        stack.append((v, True))
        stack.extend((c, False) for c in reversed(shape.children(v)))
    return out


def postorder_prefix(shape: TreeShape, s: int) -> VertexSet:
    if not 0 <= s <= shape.size:
        raise ValueError(f"s={s} outside 0..{shape.size}")
    return VertexSet.from_members(shape, postorder(shape)[:s])


def postorder_equality_rate(shape: TreeShape) -> tuple[int, int]:
    """How many s have a post-order prefix that is optimal, out of ``|V|+1``."""
    vals = phi_profile_dp(shape).values
    order = postorder(shape)
    member = np.zeros(shape.size, dtype=bool)
    hits = int(vals[0] == 0)
    for s, v in enumerate(order, start=1):
        member[v] = True
        b = boundary_size(shape, member)
        if b < vals[s]:
            raise AssertionError("prefix beat the exact optimum")
        hits += int(b == vals[s])
    return hits, shape.size + 1


# -- path construction (q in {3, 4}) ---------------------------------------


@dataclass(frozen=True)
class CaseStep:
    step: int
    case: int
    r_before: int
    r_after: int
    s_i: int


@dataclass
class UpperConstruction:
    shape: TreeShape
    s: int
    path: list[int]
    case_schedule: list[CaseStep]
    S: VertexSet
    S0: list[int]
    S1: list[int]
    S1p: list[int]
    S2: list[int]
    alpha: int
    adjusted: VertexSet | None = None
    adjust_info: dict = field(default_factory=dict)

    def observations(self) -> dict[str, bool]:
        """Structural checks on the construction, keyed by name."""
        shape = self.shape
        parts = self.S0 + self.S1 + self.S2
        border = set(np.flatnonzero(boundary_mask(shape, self.S.member)).tolist())
        proper = 0 < self.s < shape.size
        return {
            "size": len(self.S) == self.s,
            "path_partition": (not proper) or (len(parts) == len(set(parts)) and set(parts) == set(self.path)),
            "path_no_leaf": all(not shape.is_leaf(v) for v in self.path),
            "terminates_by_d": len(self.case_schedule) <= shape.d,
            "border_split": (not proper)
            or (not set(self.S1p) & set(self.S2) and border == set(self.S1p) | set(self.S2)),
            "s1p_eq_s1": len(self.S1p) == len(self.S1),
        }

    def boundary(self) -> int:
        return boundary_size(self.shape, self.S.member)

    def best_boundary(self) -> int:
        b = self.boundary()
        if self.adjusted is not None:
            b = min(b, boundary_size(self.shape, self.adjusted.member))
        return b

    def to_dict(self) -> dict:
        return {
            "q": self.shape.q,
            "d": self.shape.d,
            "s": self.s,
            "alpha": self.alpha,
            "path": self.path,
            "case_schedule": [c.__dict__ for c in self.case_schedule],
            "S": self.S.members(),
            "S0": self.S0,
            "S1": self.S1,
            "S1p": self.S1p,
            "S2": self.S2,
            "S_bar": None if self.adjusted is None else self.adjusted.members(),
            "S_bar_info": self.adjust_info,
            "observations": self.observations(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _block(shape: TreeShape, v: int, member: np.ndarray, value: bool = True) -> None:
    for a, w in shape.desc_blocks(v):
        member[a : a + w] = value


def path_construct(shape: TreeShape, s: int) -> UpperConstruction:
    q, d = shape.q, shape.d
    if q not in (3, 4):
        raise ValueError(f"the path construction needs q in {{3, 4}}, got {q}")
    if not 1 <= s <= shape.size:
        raise ValueError(f"s={s} outside 1..{shape.size}")
    alpha = ilog_floor(d, q) - 2 if d >= 1 else -2
    member = np.zeros(shape.size, dtype=bool)
    S0: list[int] = []
    S1: list[int] = []
    S1p: list[int] = []
    S2: list[int] = []
    sched: list[CaseStep] = []
    path = [0]
    if s == shape.size:
        # everything fits; the border is empty and the recursion is not needed
        member[:] = True
        sched.append(CaseStep(1, 4, s, 0, q))
        return UpperConstruction(shape, s, path, sched, VertexSet(shape, member), S0, S1, S1p, S2, alpha)
    r = s
    i = 1
    while r > 0:
        u = path[-1]
        t = shape.t(i)
        c1, c2 = shape.child(u, 1), shape.child(u, 2)
        if r <= t - 2:
            S0.append(u)
            sched.append(CaseStep(i, 1, r, r, 0))
            path.append(c1)
        elif r <= 2 * t - 2:
            _block(shape, c1, member)
            member[c1] = False
            S1p.append(c1)
            S1.append(u)
            sched.append(CaseStep(i, 2, r, r - (t - 1), 1))
            r -= t - 1
            if r:
                path.append(c2)
        elif r == 2 * t - 1:
            _block(shape, c1, member)
            _block(shape, c2, member)
            member[c2] = False
            S2.append(u)
            if t > 1:
                # c2 is clean but all its children are in S, so it is border
                S2.append(c2)
                path.append(c2)
            sched.append(CaseStep(i, 3, r, 0, 1))
            r = 0
        else:
            k = r // t
            for j in range(1, k + 1):
                _block(shape, shape.child(u, j), member)
            S2.append(u)
            sched.append(CaseStep(i, 4, r, r - k * t, k))
            r -= k * t
            if r:
                path.append(shape.child(u, k + 1))
        i += 1
        if i > d + 1:
            raise AssertionError("construction did not terminate by round d")
    con = UpperConstruction(shape, s, path, sched, VertexSet(shape, member), S0, S1, S1p, S2, alpha)
    _adjust(con)
    return con


def _adjust(con: UpperConstruction) -> None:
    """Strip the right-most occupied subtree at level ``d-(alpha+1)`` and refill."""
    shape, member = con.shape, con.S.member
    L = shape.d - (con.alpha + 1)
    info: dict = {"level": L}
    con.adjust_info = info
    if not 1 <= L <= shape.d:
        info["status"] = "level out of range"
        return
    sub = subtree_member_counts(shape, member)
    lo, hi = shape.level_start[L], shape.level_start[L + 1]
    occ = np.flatnonzero(sub[lo:hi])
    if occ.size == 0:
        info["status"] = "no occupied subtree"
        return
    u = int(lo + occ[-1])
    # extend the path to level L by the right-most-occupied-child rule
    ext = list(con.path)
    while len(ext) <= L:
        kids = shape.children(ext[-1])
        hit = [c for c in kids if sub[c]]
        ext.append(hit[-1] if hit else kids[0])
    didx = shape.desc_array(u)
    removed = didx[member[didx]]
    desc = set(didx.tolist())
    pool = [v for v in con.S1p if v not in desc] + [v for v in con.S2 if v not in desc]
    info.update(u=u, extended_path=ext, removed=int(removed.size), pool=len(pool))
    if len(pool) < removed.size:
        info["status"] = "not enough refill vertices"
        return
    bar = member.copy()
    bar[removed] = False
    bar[pool[: removed.size]] = True
    info["status"] = "ok"
    con.adjusted = VertexSet(shape, bar)


@dataclass(frozen=True)
class ConstructionReport:
    q: int
    d: int
    bound: int
    threshold_ok: bool
    max_boundary: int
    failing_s: list[int]
    observations_ok: bool
    bad_observations: list[int]


def upper_bound_q34(q: int, d: int) -> int:
    return d - ilog_floor(d, q) + 2


def verify_path_construction(shape: TreeShape) -> ConstructionReport:
    bound = upper_bound_q34(shape.q, shape.d)
    worst = 0
    failing: list[int] = []
    bad_obs: list[int] = []
    for s in range(1, shape.size):
        con = path_construct(shape, s)
        if not all(con.observations().values()):
            bad_obs.append(s)
        b = con.best_boundary()
        worst = max(worst, b)
        if b > bound:
            failing.append(s)
    return ConstructionReport(shape.q, shape.d, bound, not failing, worst, failing, not bad_obs, bad_obs)


def construction_threshold(q: int, depths: Iterable[int]) -> int | None:
    """Smallest tested d from which every larger tested depth meets the bound."""
    ds = sorted(depths)
    ok = {d: verify_path_construction(TreeShape(q, d)).threshold_ok for d in ds}
    threshold = None
    for d in reversed(ds):
        if not ok[d]:
            break
        threshold = d
    return threshold


# -- local structure probe -------------------------------------------------


@dataclass(frozen=True)
class LocalStructure:
    dsub: int
    s: int
    phi_s: int
    phi_next: int | None
    witness: list[int]
    border: list[int]
    witness_next: list[int] | None
    border_next: list[int] | None
    # min border over (s+1)-supersets of the s-witness
    superset_best: int | None
    nested: bool | None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def local_structure_report(dsub: int, s: int, q: int = 3) -> LocalStructure:
    shape = TreeShape(q, dsub)
    if not 0 <= s <= shape.size:
        raise ValueError(f"s={s} outside 0..{shape.size}")
    vals = phi_profile_dp(shape).values
    W = dp_witness(shape, s)
    border = np.flatnonzero(boundary_mask(shape, W.member)).tolist()
    if s == shape.size:
        return LocalStructure(dsub, s, int(vals[s]), None, W.members(), border, None, None, None, None)
    W2 = dp_witness(shape, s + 1)
    border2 = np.flatnonzero(boundary_mask(shape, W2.member)).tolist()
    sup = int(profile_rooted(shape.to_rooted(), forced_in=W.members())[s + 1])
    return LocalStructure(
        dsub, s, int(vals[s]), int(vals[s + 1]), W.members(), border, W2.members(), border2, sup, bool(sup == vals[s + 1])
    )
