import numpy as np
import pytest

from treeperim import kernels
from treeperim.compress import _levels
from treeperim.tree import RootedTree, TreeShape

BACKENDS = kernels.available_backends()
pytestmark = pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels not built")


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


def test_minplus_parity():
    rng = np.random.default_rng(0)
    for _ in range(50):
        a = rng.integers(0, 20, size=int(rng.integers(1, 30))).astype(np.int64)
        b = rng.integers(0, 20, size=int(rng.integers(1, 30))).astype(np.int64)
        a[rng.random(a.size) < 0.2] = kernels.INF
        outs = [m.minplus_conv(a, b) for m in BACKENDS.values()]
        assert all(np.array_equal(outs[0], o) for o in outs[1:])


def test_vs_subset_parity():
    rng = np.random.default_rng(1)
    for _ in range(30):
        t = RootedTree.random(int(rng.integers(1, 12)), rng)
        nbr = np.array(t.neighbor_masks(), dtype=np.int64)
        assert len({m.vs_subset_dp(nbr) for m in BACKENDS.values()}) == 1


@pytest.mark.parametrize("strict", [False, True])
def test_down_candidates_parity(strict):
    rng = np.random.default_rng(2)
    for q, d in [(2, 3), (3, 3), (4, 2), (5, 2)]:
        sh = TreeShape(q, d)
        lv = _levels(sh)
        for _ in range(20):
            m = (rng.random(sh.size) < rng.random()).astype(np.uint8)
            for tier in (1, 2):
                outs = [b.down_candidates(m, q, sh.n_internal, lv, tier, strict, -1) for b in BACKENDS.values()]
                assert all(np.array_equal(outs[0], o) for o in outs[1:])
                scans = {b.down_scan(m, q, sh.n_internal, lv, tier, strict) for b in BACKENDS.values()}
                assert len(scans) == 1


def test_exchange_profile_parity():
    rng = np.random.default_rng(4)
    sh = TreeShape(3, 3)
    for _ in range(20):
        m = (rng.random(sh.size) < 0.5).astype(np.uint8)
        ins = np.flatnonzero(m)
        outs_ = np.flatnonzero(m == 0)
        k = min(5, ins.size, outs_.size)
        rem = rng.permutation(ins)[:k].astype(np.int64)
        add = rng.permutation(outs_)[:k].astype(np.int64)
        res = [b.exchange_profile(m, 3, sh.n_internal, rem, add) for b in BACKENDS.values()]
        assert all(np.array_equal(res[0], r) for r in res[1:])
