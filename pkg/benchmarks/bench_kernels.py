"""Compare the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints one row per workload with the best wall time for each backend and the
speedup. End-to-end rows swap the active backend inside ``treeperim.kernels``.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from treeperim import kernels, oracle
from treeperim.compress import _levels, aeolian_fix
from treeperim.tree import RootedTree, TreeShape
from treeperim.vset import VertexSet


def kernel_workloads(rng: np.random.Generator):
    a = rng.integers(0, 50, 3000).astype(np.int64)
    b = rng.integers(0, 50, 3000).astype(np.int64)
    tree = RootedTree.random(18, rng)
    nbr = np.array(tree.neighbor_masks(), dtype=np.int64)
    sh = TreeShape(3, 6)
    m = (rng.random(sh.size) < 0.4).astype(np.uint8)
    lv = _levels(sh)
    ins, outs = np.flatnonzero(m), np.flatnonzero(m == 0)
    rem, add = ins[:60].astype(np.int64), outs[:60].astype(np.int64)
    return {
        "minplus_conv 3000x3000": lambda k: k.minplus_conv(a, b),
        "vs_subset_dp n=18": lambda k: k.vs_subset_dp(nbr),
        "down_candidates (3,6) tier 2": lambda k: k.down_candidates(m, 3, sh.n_internal, lv, 2, False, -1),
        "exchange_profile (3,6) m=60": lambda k: k.exchange_profile(m, 3, sh.n_internal, rem, add),
    }


def _with_backend(mod, fn):
    saved = kernels.impl
    kernels.impl = mod
    try:
        oracle._complete_dp.cache_clear()
        return fn()
    finally:
        kernels.impl = saved
        oracle._complete_dp.cache_clear()


def end_to_end(rng: np.random.Generator):
    sh = TreeShape(4, 4)
    sets = [VertexSet.random(sh, rng) for _ in range(5)]
    return {
        "profile DP (3,8)": lambda: oracle.phi_profile_dp(TreeShape(3, 8)),
        "aeolian_fix x5 on (4,4)": lambda: [aeolian_fix(S) for S in sets],
    }


def best(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels unavailable; only the numpy fallback is installed")
    names = list(backends)
    print(f"{'workload':34s}" + "".join(f"{n:>12s}" for n in names) + "     speedup")
    rng = np.random.default_rng(args.seed)
    rows = [(label, {n: best(lambda: f(backends[n]), args.repeat) for n in names}) for label, f in kernel_workloads(rng).items()]
    rows += [
        (label, {n: best(lambda: _with_backend(backends[n], f), args.repeat) for n in names})
        for label, f in end_to_end(rng).items()
    ]
    for label, t in rows:
        speed = f"{t['python'] / t['cython']:9.1f}x" if "cython" in t else ""
        print(f"{label:34s}" + "".join(f"{t[n]:11.4f}s" for n in names) + speed)


if __name__ == "__main__":
    main()
