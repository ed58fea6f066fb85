"""Left (treeswap), down (u-v exchange) and aeolian compressions, with audit traces.

Every step is checked to be a compression: cardinality is preserved and the
vertex border never grows. Fixpoint drivers stop at a configurable step cap
(default ``|V|**2``, overridable via ``TREEPERIM_MAX_STEPS``) and raise
:class:`StepCapExceeded` carrying the partial trace.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import kernels
from .tree import TreeShape
from .vset import VertexSet, boundary_size, first_swappable

StepKind = Literal["left-treeswap", "down-exchange", "aeolian-move"]


@dataclass(frozen=True)
class CompressionStep:
    kind: StepKind
    u: int
    v: int
    moved: int
    boundary_before: int
    boundary_after: int

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "u": self.u,
            "v": self.v,
            "moved": self.moved,
            "boundary_before": self.boundary_before,
            "boundary_after": self.boundary_after,
        }


@dataclass
class CompressionTrace:
    initial: VertexSet
    final: VertexSet
    steps: list[CompressionStep] = field(default_factory=list)
    terminated: Literal["fixpoint", "step-cap"] = "fixpoint"

    def to_jsonl(self) -> str:
        return "".join(json.dumps(s.to_dict()) + "\n" for s in self.steps)


class StepCapExceeded(RuntimeError):
    def __init__(self, trace: CompressionTrace, cap: int):
        super().__init__(f"compression did not reach a fixpoint within {cap} steps")
        self.trace = trace
        self.cap = cap


class CompressionError(AssertionError):
    """A step would have grown the border; indicates a bug, never expected."""


def default_step_cap(shape: TreeShape) -> int:
    env = os.environ.get("TREEPERIM_MAX_STEPS")
    if env:
        cap = int(env)
        if cap <= 0:
            raise ValueError("TREEPERIM_MAX_STEPS must be positive")
        return cap
    return shape.size**2


# -- left compression ------------------------------------------------------


def find_swappable(S: VertexSet) -> tuple[int, int] | None:
    return first_swappable(S.shape, S.member)


def treeswap(S: VertexSet, u: int, v: int) -> VertexSet:
    shape = S.shape
    if shape.level(u) != shape.level(v):
        raise ValueError(f"treeswap needs same-level vertices, got {u} and {v}")
    if u == v:
        return S
    m = S.member.copy()
    for (a, w), (b, _) in zip(shape.desc_blocks(u), shape.desc_blocks(v)):
        m[a : a + w], m[b : b + w] = S.member[b : b + w], S.member[a : a + w]
    return VertexSet(shape, m)


def _run(S: VertexSet, step_fn, max_steps: int | None) -> tuple[VertexSet, CompressionTrace]:
    cap = default_step_cap(S.shape) if max_steps is None else max_steps
    trace = CompressionTrace(initial=S, final=S)
    cur = S
    for _ in range(cap):
        res = step_fn(cur)
        if res is None:
            trace.final = cur
            return cur, trace
        cur, step = res
        trace.steps.append(step)
    trace.final = cur
    if step_fn(cur) is None:
        return cur, trace
    trace.terminated = "step-cap"
    raise StepCapExceeded(trace, cap)


def _checked(kind: StepKind, S: VertexSet, S2: VertexSet, u: int, v: int, moved: int, before: int) -> tuple[VertexSet, CompressionStep]:
    after = boundary_size(S2.shape, S2.member)
    if after > before or len(S2) != len(S):
        raise CompressionError(f"{kind} ({u},{v}) grew the border {before}->{after}")
    return S2, CompressionStep(kind, u, v, moved, before, after)


def left_step(S: VertexSet) -> tuple[VertexSet, CompressionStep] | None:
    pair = find_swappable(S)
    if pair is None:
        return None
    u, v = pair
    before = boundary_size(S.shape, S.member)
    return _checked("left-treeswap", S, treeswap(S, u, v), u, v, 0, before)


def left_fix(S: VertexSet, max_steps: int | None = None) -> tuple[VertexSet, CompressionTrace]:
    return _run(S, left_step, max_steps)


# -- down compression ------------------------------------------------------


def find_down_swappable(S: VertexSet, strict: bool = False) -> tuple[int, int] | None:
    """First down-swappable pair; exchanges inside ``Desc(u)`` are scanned before all others.

    With ``strict`` only exchanges that shrink the border count.
    """
    shape = S.shape
    levels = _levels(shape)
    for tier in (1, 2):
        u, v = kernels.down_scan(S.member, shape.q, shape.n_internal, levels, tier, strict)
        if u >= 0:
            return u, v
    return None


_LEVEL_CACHE: dict[tuple[int, int], np.ndarray] = {}


def _levels(shape: TreeShape) -> np.ndarray:
    key = (shape.q, shape.d)
    if key not in _LEVEL_CACHE:
        _LEVEL_CACHE[key] = shape.levels_array()
    return _LEVEL_CACHE[key]


def down_step(S: VertexSet, strict: bool = False) -> tuple[VertexSet, CompressionStep] | None:
    pair = find_down_swappable(S, strict)
    if pair is None:
        return None
    u, v = pair
    before = boundary_size(S.shape, S.member)
    return _checked("down-exchange", S, S.with_changes(remove=[u], add=[v]), u, v, 1, before)


def down_fix(S: VertexSet, max_steps: int | None = None) -> tuple[VertexSet, CompressionTrace]:
    return _run(S, down_step, max_steps)


# -- aeolian compression ---------------------------------------------------
#
# Equal-border aeolian moves and equal-border down exchanges can undo each
# other forever, and for some sizes no left- and down-compressed set has the
# peak structure at all. The driver therefore runs in phases, each with a
# strictly decreasing potential, so it always terminates:
#
#   settle: (border, -total depth, BFS membership vector). Left steps, all down
#           exchanges, and aeolian moves that do not make S shallower.
#   peak:   (border, BFS membership vector). Left steps, border-reducing down
#           exchanges, and aeolian moves that put a member earlier in BFS order.
#   polish: the settle potential again, restricted to left steps and down
#           exchanges whose result keeps the peak order.
#
# The peak and polish phases run only when the settled set violates the peak
# order. A BFS membership vector is "smaller" when its first difference gains
# a member.

Phase = Literal["settle", "peak"]


def subtree_member_counts(shape: TreeShape, member: np.ndarray) -> np.ndarray:
    sub = member.astype(np.int64)
    for i in range(shape.d - 1, -1, -1):
        lo, hi = shape.level_start[i], shape.level_start[i + 1]
        kids = sub[shape.level_start[i + 1] : shape.level_start[i + 2]]
        sub[lo:hi] += kids.reshape(hi - lo, shape.q).sum(axis=1)
    return sub


def _removal_order(shape: TreeShape, member: np.ndarray, v: int) -> np.ndarray:
    # deepest level first, right-most first == descending BFS index
    idx = shape.desc_array(v)
    return idx[member[idx]][::-1]


def _shallow_removal_order(shape: TreeShape, member: np.ndarray, v: int) -> np.ndarray:
    # shallowest level first, right-most first within a level
    parts = []
    for a, w in shape.desc_blocks(v):
        blk = np.arange(a, a + w, dtype=np.int64)
        parts.append(blk[member[a : a + w]][::-1])
    return np.concatenate(parts)


def _addition_order(shape: TreeShape, member: np.ndarray, u: int) -> np.ndarray:
    parts = []
    for a, w in reversed(shape.desc_blocks(u)):
        blk = np.arange(a, a + w, dtype=np.int64)
        parts.append(blk[~member[a : a + w]])
    return np.concatenate(parts)


def _admissible(prof: np.ndarray, rems: np.ndarray, adds: np.ndarray, levels: np.ndarray, phase: Phase) -> np.ndarray:
    """Mask over m = 1..M of moves that lower the phase potential."""
    M = prof.size - 1
    rems, adds = rems[:M], adds[:M]
    lower = prof[1:] < prof[0]
    tie = prof[1:] == prof[0]
    earlier = np.minimum.accumulate(adds) < np.minimum.accumulate(rems)
    if phase == "peak":
        return lower | (tie & earlier)
    sink = np.cumsum(levels[adds] - levels[rems])
    return lower | (tie & ((sink > 0) | ((sink == 0) & earlier)))


def find_aeolian_move(S: VertexSet, phase: Phase = "settle") -> tuple[int, int, np.ndarray, np.ndarray] | None:
    """Earliest (u, v) with an admissible move, taking the largest admissible count.

    Removals from ``Desc(v)`` are tried deepest-first; if no count is admissible
    they are retried shallowest-first (members just below a clean vertex).

    Returns ``(u, v, removed, added)``.
    """
    shape, member = S.shape, S.member
    levels = _levels(shape)
    sub = subtree_member_counts(shape, member)
    for i in range(1, shape.d + 1):
        lo, hi = shape.level_start[i], shape.level_start[i + 1]
        lvl = sub[lo:hi]
        open_u = np.flatnonzero(lvl < shape.t(i)) + lo
        has_v = np.flatnonzero(lvl > 0) + lo
        if not open_u.size or not has_v.size:
            continue
        for u in open_u.tolist():
            vs = has_v[has_v > u]
            if not vs.size:
                break
            adds = _addition_order(shape, member, u)
            for v in vs.tolist():
                for order in (_removal_order, _shallow_removal_order):
                    rems = order(shape, member, v)
                    prof = kernels.exchange_profile(member, shape.q, shape.n_internal, rems, adds)
                    ok = np.flatnonzero(_admissible(prof, rems, adds, levels, phase))
                    if ok.size:
                        m = int(ok[-1]) + 1
                        return u, v, rems[:m], adds[:m]
    return None


def aeolian_step(S: VertexSet, phase: Phase = "settle") -> tuple[VertexSet, CompressionStep] | None:
    res = left_step(S)
    if res is not None:
        return res
    res = down_step(S, strict=phase == "peak")
    if res is not None:
        return res
    move = find_aeolian_move(S, phase)
    if move is None:
        return None
    u, v, rems, adds = move
    before = boundary_size(S.shape, S.member)
    S2 = S.with_changes(remove=rems.tolist(), add=adds.tolist())
    return _checked("aeolian-move", S, S2, u, v, len(rems), before)


def polish_step(S: VertexSet) -> tuple[VertexSet, CompressionStep] | None:
    """First left step or down exchange whose result still has the peak order."""
    res = left_step(S)
    if res is not None and check_peak_order(res[0])[0]:
        return res
    shape = S.shape
    before = boundary_size(shape, S.member)
    for tier in (1, 2):
        pairs = kernels.down_candidates(S.member, shape.q, shape.n_internal, _levels(shape), tier)
        for u, v in pairs.tolist():
            S2 = S.with_changes(remove=[u], add=[v])
            if check_peak_order(S2)[0]:
                return _checked("down-exchange", S, S2, u, v, 1, before)
    return None


def aeolian_fix(S: VertexSet, max_steps: int | None = None) -> tuple[VertexSet, CompressionTrace]:
    cap = default_step_cap(S.shape) if max_steps is None else max_steps
    cur, trace = _run(S, aeolian_step, cap)
    if check_peak_order(cur)[0]:
        return cur, trace
    for step_fn in (lambda X: aeolian_step(X, "peak"), polish_step):
        try:
            cur, tail = _run(cur, step_fn, cap - len(trace.steps))
        except StepCapExceeded as exc:
            exc.trace.initial = S
            exc.trace.steps[:0] = trace.steps
            raise
        trace.steps.extend(tail.steps)
    trace.final = cur
    return cur, trace


def is_aeolian_compressed(S: VertexSet) -> bool:
    """Left- and down-compressed with no admissible settle-phase aeolian move."""
    return find_swappable(S) is None and find_down_swappable(S) is None and find_aeolian_move(S) is None


# -- structural checkers ---------------------------------------------------


def check_trichotomy(S: VertexSet) -> tuple[bool, int | None]:
    """Every member has all children in, one child out (with a child out), or the two-child case."""
    shape, member = S.shape, S.member
    ni, q = shape.n_internal, shape.q
    if not ni:
        return True, None
    kid_in = member[1:].reshape(ni, q)
    n_out = q - kid_in.sum(axis=1)
    grand_in = np.zeros(shape.size, dtype=np.int64)
    grand_in[:ni] = kid_in.sum(axis=1)
    for u in np.flatnonzero(member[:ni] & (n_out > 0)).tolist():
        out = [c for c in range(q * u + 1, q * u + q + 1) if not member[c]]
        if len(out) == 1:
            v = out[0]
            if v < ni and grand_in[v] < q:
                continue
        elif len(out) == 2 and out[0] < ni:
            a, b = out
            mixed = lambda x: 0 < grand_in[x] < q
            if (mixed(a) and grand_in[b] == 0) or (mixed(b) and grand_in[a] == 0):
                continue
        return False, u
    return True, None


def check_peak_order(S: VertexSet) -> tuple[bool, tuple[int, int] | None]:
    """Same-level u left of v, both subtrees meeting S, forces ``Desc(u) - S`` inside ``{u}``."""
    shape, member = S.shape, S.member
    sub = subtree_member_counts(shape, member)
    for i in range(shape.d + 1):
        lo, hi = shape.level_start[i], shape.level_start[i + 1]
        hit = np.flatnonzero(sub[lo:hi] > 0)
        if hit.size < 2:
            continue
        v = int(hit[-1]) + lo
        us = hit[:-1] + lo
        missing = shape.t(i) - sub[us] - (~member[us]).astype(np.int64)
        bad = np.flatnonzero(missing > 0)
        if bad.size:
            return False, (int(us[bad[0]]), v)
    return True, None


def level_presence(shape: TreeShape, member: np.ndarray) -> np.ndarray:
    """``pres[v, L]``: some member of ``Desc(v)`` lies on level ``L``."""
    d, q = shape.d, shape.q
    pres = np.zeros((shape.size, d + 1), dtype=bool)
    for i in range(d, -1, -1):
        lo, hi = shape.level_start[i], shape.level_start[i + 1]
        pres[lo:hi, i] = member[lo:hi]
        if i < d:
            kids = pres[shape.level_start[i + 1] : shape.level_start[i + 2]]
            pres[lo:hi] |= kids.reshape(hi - lo, q, d + 1).any(axis=1)
    return pres


def check_level_continuity(S: VertexSet) -> tuple[bool, int | None]:
    """If ``Desc(u)`` meets S on level i, it meets S on every level from i down to d."""
    pres = level_presence(S.shape, S.member)
    any_row = pres.any(axis=1)
    first = np.argmax(pres, axis=1)
    cols = np.arange(pres.shape[1])
    need = cols[None, :] >= first[:, None]
    bad = np.flatnonzero(any_row & (need & ~pres).any(axis=1))
    if bad.size:
        return False, int(bad[0])
    return True, None
