from fractions import Fraction

import numpy as np
import pytest

from treeperim.oracle import (
    OracleCapError,
    dp_witness,
    enumerate_optima,
    nesting_report,
    peak_rooted,
    phi_bruteforce,
    phi_peak,
    phi_profile_dp,
    phi_total,
    profile_bruteforce,
    profile_rooted,
)
from treeperim.tree import RootedTree, TreeShape
from treeperim.vset import boundary_size


def test_bruteforce_examples():
    sh = TreeShape(2, 2)
    assert phi_bruteforce(sh, 1) == 1
    assert phi_bruteforce(sh, 3) == 1
    assert phi_bruteforce(sh, 0) == 0


def test_bruteforce_cap():
    with pytest.raises(OracleCapError):
        phi_bruteforce(TreeShape(2, 5), 3)


def test_profile_examples():
    assert phi_profile_dp(TreeShape(2, 2)).values.tolist() == [0, 1, 1, 1, 1, 1, 1, 0]
    assert phi_profile_dp(TreeShape(3, 1)).values.tolist() == [0, 1, 1, 1, 0]
    assert phi_profile_dp(TreeShape(5, 2)).values.max() == 2


def test_peak_examples():
    assert phi_peak(TreeShape(2, 2)).peak == 1
    assert phi_peak(TreeShape(5, 1)).peak == 1
    assert phi_peak(TreeShape(4, 0)).peak == 0


def test_totals():
    assert phi_total(TreeShape(2, 1))[0] == 2
    assert phi_total(TreeShape(3, 0))[0] == 0
    total, mean = phi_total(TreeShape(2, 2))
    assert total == 6 and mean == Fraction(49, 20)


@pytest.mark.parametrize("q,d", [(2, 3), (3, 2), (4, 1), (6, 1)])
def test_dp_matches_bruteforce(q, d):
    sh = TreeShape(q, d)
    assert np.array_equal(phi_profile_dp(sh).values, profile_bruteforce(sh))


@pytest.mark.parametrize("q,d", [(2, 6), (3, 4), (4, 3)])
def test_witnesses_are_exact(q, d):
    tab = phi_profile_dp(TreeShape(q, d), want_witnesses=True)
    for s in range(len(tab)):
        W = tab.witness(s)
        assert len(W) == s
        assert boundary_size(W.shape, W.member) == tab.values[s]


def test_profile_ends_at_zero():
    v = phi_profile_dp(TreeShape(3, 5)).values
    assert v[0] == 0 and v[-1] == 0


def test_dp_witness_range():
    with pytest.raises(ValueError):
        dp_witness(TreeShape(2, 2), 8)


def test_csv_export():
    tab = phi_profile_dp(TreeShape(2, 1), want_witnesses=True)
    assert tab.to_csv().splitlines() == ["s,phi", "0,0", "1,1", "2,1", "3,0"]
    text = tab.to_csv(with_witness=True)
    assert text.splitlines()[:3] == ["s,phi,witness", "0,0,", "1,1,1"]
    assert '"' not in text and text.splitlines()[-1] == "3,0,0 1 2"


def test_profile_rooted_general_tree():
    rng = np.random.default_rng(7)
    for _ in range(20):
        t = RootedTree.random(int(rng.integers(1, 13)), rng)
        assert np.array_equal(profile_rooted(t), profile_bruteforce(t))
    assert peak_rooted(RootedTree.star(4)) == 1


def test_profile_rooted_forced():
    t = TreeShape(2, 2).to_rooted()
    forced = profile_rooted(t, forced_in=[0])
    assert forced[1] == 2  # {0} alone borders both children
    assert forced[0] >= 2**39  # infeasible


def test_enumerate_optima():
    assert sorted(S.members() for S in enumerate_optima(TreeShape(2, 1), 1)) == [[1], [2]]
    assert [S.members() for S in enumerate_optima(TreeShape(2, 2), 0)] == [[]]
    assert [S.members() for S in enumerate_optima(TreeShape(2, 2), 7)] == [list(range(7))]


def test_nesting():
    assert nesting_report(TreeShape(2, 1)).chain_exists
    assert nesting_report(TreeShape(3, 0)).chain_exists
    rep = nesting_report(TreeShape(2, 2))
    assert len(rep.nested) == 7 and sum(rep.optima_counts) > 8
