"""Acceptance suites. Each returns a :class:`CriterionResult`; ``run_all`` drives
them in order and is what ``treeperim verify`` and the acceptance test call."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .bounds import guarded_ceil, ilog_ceil, log_q, pathwidth_formula, peak_bounds, peak_bounds_q2_real
from .compress import (
    StepCapExceeded,
    aeolian_fix,
    check_peak_order,
    check_trichotomy,
    down_fix,
    find_down_swappable,
    left_fix,
)
from .oracle import (
    dp_witness,
    nesting_report,
    peak_rooted,
    phi_peak,
    phi_profile_dp,
    profile_bruteforce,
)
from .sep import Layout, gap_report, optimal_layout, tree_pathwidth, vs_exact, vs_of_layout
from .tree import RootedTree, TreeShape
from .vset import VertexSet, boundary_size, is_left_ordered
from .witness import (
    construction_threshold,
    critical_size,
    local_structure_report,
    postorder_equality_rate,
    verify_path_construction,
)

DEFAULT_SEED = 20240611


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    artifact: dict = field(default_factory=dict)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def small_shapes() -> list[TreeShape]:
    """Every complete tree with 2..15 vertices."""
    out = [TreeShape(2, d) for d in (1, 2, 3)] + [TreeShape(3, d) for d in (1, 2)]
    return out + [TreeShape(q, 1) for q in range(4, 15)]


def c1_oracle_agreement() -> CriterionResult:
    bad = []
    for sh in small_shapes():
        if not np.array_equal(profile_bruteforce(sh), phi_profile_dp(sh).values):
            bad.append((sh.q, sh.d))
    return CriterionResult(1, "oracle agreement", not bad, f"{len(small_shapes())} shapes, mismatches={bad}")


def c2_large_q() -> CriterionResult:
    bad = [(q, d) for q in (5, 6, 7) for d in (1, 2, 3) if phi_peak(TreeShape(q, d)).peak != d]
    return CriterionResult(2, "peak equals depth for q>=5", not bad, f"9 shapes, mismatches={bad}")


C3_DEPTHS = {3: range(2, 9), 4: range(2, 7)}


@lru_cache(maxsize=None)
def _threshold(q: int) -> int | None:
    return construction_threshold(q, C3_DEPTHS[q])


def c3_sandwich_q34() -> CriterionResult:
    rows, bad = [], []
    for q, ds in C3_DEPTHS.items():
        thr = _threshold(q)
        for d in ds:
            rep = peak_bounds(q, d)
            up = rep.upper_int if thr is not None and d >= thr else pathwidth_formula(q, d)
            peak = phi_peak(TreeShape(q, d)).peak
            rows.append({"q": q, "d": d, "lower": rep.lower_int, "upper": up, "peak": peak})
            if not rep.lower_int <= peak <= up:
                bad.append((q, d))
    thr = {q: _threshold(q) for q in C3_DEPTHS}
    return CriterionResult(
        3, "q in {3,4} sandwich", not bad, f"{len(rows)} shapes, thresholds={thr}, outside={bad}", artifact={"rows": rows}
    )


def c4_sandwich_q2() -> CriterionResult:
    rows, bad = [], []
    for d in range(2, 13):
        rep = peak_bounds(2, d)
        peak = phi_peak(TreeShape(2, d)).peak
        rows.append({"d": d, "lower": rep.lower_int, "upper": rep.upper_int, "peak": peak})
        if not (rep.lower_int <= peak <= rep.upper_int and peak_bounds_q2_real(d) <= peak):
            bad.append(d)
    return CriterionResult(4, "q=2 sandwich", not bad, f"d=2..12, outside={bad}", artifact={"rows": rows})


C5_SHAPES = [(q, d) for q in (2, 3, 4, 5) for d in (2, 3, 4)]


def _trace_ok(trace) -> bool:
    return all(st.boundary_after <= st.boundary_before for st in trace.steps)


def c5_compression_safety(n_sets: int = 1000, seed: int = DEFAULT_SEED) -> CriterionResult:
    rng = np.random.default_rng(seed)
    fails: dict[str, int] = {"left": 0, "down": 0, "aeolian": 0, "cap": 0}
    for k in range(n_sets):
        q, d = C5_SHAPES[k % len(C5_SHAPES)]
        S = VertexSet.random(TreeShape(q, d), rng)
        try:
            L, tl = left_fix(S)
            D, td = down_fix(S)
            A, ta = aeolian_fix(S)
        except StepCapExceeded:
            fails["cap"] += 1
            continue
        if not (len(L) == len(S) and _trace_ok(tl) and is_left_ordered(L)[0]):
            fails["left"] += 1
        if not (len(D) == len(S) and _trace_ok(td) and find_down_swappable(D) is None):
            fails["down"] += 1
        if not (len(A) == len(S) and _trace_ok(ta) and check_trichotomy(A)[0] and check_peak_order(A)[0]):
            fails["aeolian"] += 1
    return CriterionResult(5, "compression safety", not any(fails.values()), f"{n_sets} sets, failures={fails}")


def c6_aeolian_optimal() -> CriterionResult:
    bad = []
    for q, d in ((3, 4), (2, 6)):
        sh = TreeShape(q, d)
        vals = phi_profile_dp(sh).values
        for s in range(sh.size + 1):
            A, _ = aeolian_fix(dp_witness(sh, s))
            if boundary_size(sh, A.member) != vals[s]:
                bad.append((q, d, s))
    return CriterionResult(6, "aeolian fix keeps optimal border", not bad, f"(3,4) and (2,6) all s, misses={bad[:5]}")


def c7_critical_sizes() -> CriterionResult:
    cases = [(5, d) for d in (2, 3)] + [(3, d) for d in range(4, 9)] + [(2, d) for d in (10, 12)]
    rows, bad = [], []
    for q, d in cases:
        cs = critical_size(q, d)
        val = int(phi_profile_dp(TreeShape(q, d)).values[cs.size])
        if q >= 5:
            need = d
        elif q == 3:
            need = guarded_ceil(d - log_q(d, 3) - (log_q(2, 3) + 1))
        else:
            need = (d - ilog_ceil(3 * d, 2)) // 2
        rows.append({"q": q, "d": d, "size": cs.size, "phi": val, "need": need})
        if val < need:
            bad.append((q, d))
    return CriterionResult(7, "critical cardinalities", not bad, f"{len(cases)} cases, short={bad}", artifact={"rows": rows})


def c8_construction() -> CriterionResult:
    notes, ok = [], True
    for q, ds in C3_DEPTHS.items():
        thr = _threshold(q)
        if thr is None:
            ok = False
            notes.append(f"q={q}: no threshold")
            continue
        for d in list(ds)[-2:]:
            rep = verify_path_construction(TreeShape(q, d))
            good = rep.observations_ok and (d < thr or rep.threshold_ok)
            ok &= good
            notes.append(f"({q},{d}) max={rep.max_boundary}<=bound {rep.bound}" if good else f"({q},{d}) FAILED")
    return CriterionResult(8, "upper-bound construction", ok, "; ".join(notes))


def _random_trees(count: int, seed: int, nmax: int = 12) -> list[RootedTree]:
    rng = np.random.default_rng(seed)
    return [RootedTree.random(int(rng.integers(1, nmax + 1)), rng) for _ in range(count)]


def c9_pathwidth(seed: int = DEFAULT_SEED) -> CriterionResult:
    bad = []
    for q, dmax in ((2, 12), (3, 6), (4, 5)):
        for d in range(dmax + 1):
            sh = TreeShape(q, d)
            f = pathwidth_formula(q, d)
            if tree_pathwidth(sh) != f or vs_of_layout(sh, optimal_layout(sh)) != f:
                bad.append((q, d))
    trees = _random_trees(100, seed)
    rb = sum(vs_exact(t) != tree_pathwidth(t) for t in trees)
    return CriterionResult(9, "pathwidth", not bad and not rb, f"complete mismatches={bad}, random mismatches={rb}/100")


def c10_peak_below_vs(seed: int = DEFAULT_SEED + 1) -> CriterionResult:
    rng = np.random.default_rng(seed)
    bad = 0
    for t in _random_trees(100, seed):
        L = Layout(tuple(rng.permutation(t.n).tolist()))
        bad += vs_of_layout(t, L) < peak_rooted(t)
    return CriterionResult(10, "peak at most layout separation", not bad, f"100 layouts, violations={bad}")


def gap_rows() -> list:
    return [gap_report(TreeShape(2, d)) for d in range(1, 13)]


def c11_gap() -> CriterionResult:
    rows = gap_rows()
    neg = [r.d for r in rows if r.gap < 0]
    pos = [r.d for r in rows if r.gap >= 1]
    return CriterionResult(
        11,
        "q=2 separation gap",
        not neg and bool(pos),
        f"gap>=1 at d={pos}, negative at {neg}",
        artifact={"rows": [r.row() for r in rows]},
    )


def c12_reports() -> CriterionResult:
    art: dict = {"postorder": [], "nesting": [], "local": []}
    for q in (2, 3):
        for d in range(1, 6):
            hits, total = postorder_equality_rate(TreeShape(q, d))
            art["postorder"].append({"q": q, "d": d, "equal": hits, "total": total})
    for d in (1, 2, 3):
        art["nesting"].append(nesting_report(TreeShape(2, d)).to_dict())
    for s in (178, 179):
        art["local"].append(local_structure_report(5, s).to_dict())
    loc = art["local"]
    consistent = all(r["superset_best"] >= r["phi_next"] for r in loc) and all(
        len(r["border"]) == r["phi_s"] for r in loc
    )
    rates = ", ".join(f"({r['q']},{r['d']}) {r['equal']}/{r['total']}" for r in art["postorder"])
    return CriterionResult(12, "report artifacts", consistent, f"post-order optimal rates: {rates}", artifact=art)


SUITES: dict[int, Callable[[], CriterionResult]] = {
    1: c1_oracle_agreement,
    2: c2_large_q,
    3: c3_sandwich_q34,
    4: c4_sandwich_q2,
    5: c5_compression_safety,
    6: c6_aeolian_optimal,
    7: c7_critical_sizes,
    8: c8_construction,
    9: c9_pathwidth,
    10: c10_peak_below_vs,
    11: c11_gap,
    12: c12_reports,
}

TIME_LIMITS = {1: 60.0, 2: 60.0, 3: 600.0, 4: 600.0}


def run_one(n: int) -> CriterionResult:
    t0 = time.perf_counter()
    res = SUITES[n]()
    res.seconds = time.perf_counter() - t0
    limit = TIME_LIMITS.get(n)
    if limit is not None and res.seconds > limit:
        res.passed = False
        res.detail += f"; over the {limit:.0f}s budget"
    return res


def run_all(select: list[int] | None = None) -> list[CriterionResult]:
    return [run_one(n) for n in (select or sorted(SUITES))]
