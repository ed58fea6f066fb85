import json

import numpy as np
import pytest

from treeperim.oracle import phi_profile_dp
from treeperim.tree import TreeShape
from treeperim.vset import boundary, boundary_size
from treeperim.witness import (
    construction_threshold,
    critical_size,
    local_structure_report,
    postorder,
    postorder_equality_rate,
    postorder_prefix,
    path_construct,
    upper_bound_q34,
    verify_path_construction,
)


@pytest.mark.parametrize("q,d,size", [(5, 2, 14), (3, 4, 51), (2, 10, 636)])
def test_critical_sizes(q, d, size):
    assert critical_size(q, d).size == size


def test_critical_size_needs_positive_D():
    with pytest.raises(ValueError):
        critical_size(3, 2)
    with pytest.raises(ValueError):
        critical_size(2, 4)


def test_postorder_sequence():
    assert postorder(TreeShape(2, 2)) == [3, 4, 1, 5, 6, 2, 0]


def test_postorder_prefix_examples():
    sh = TreeShape(2, 2)
    S = postorder_prefix(sh, 3)
    assert S.members() == [1, 3, 4] and boundary(S).members() == [0]
    S = postorder_prefix(sh, 1)
    assert S.members() == [3] and boundary(S).members() == [1]
    assert postorder_prefix(sh, 0).members() == []


def test_postorder_rate_bounds():
    hits, total = postorder_equality_rate(TreeShape(3, 3))
    assert 0 < hits <= total == 41


def test_case_two_at_step_one():
    sh = TreeShape(3, 6)
    con = path_construct(sh, 363)
    assert [(c.step, c.case) for c in con.case_schedule] == [(1, 2)]
    assert con.S.members() == [v for v in sh.desc_array(1).tolist() if v != 1]
    assert con.boundary() == 1


def test_singleton_is_one_leaf():
    con = path_construct(TreeShape(3, 4), 1)
    assert len(con.S) == 1 and con.S.shape.is_leaf(con.S.members()[0])
    assert [c.case for c in con.case_schedule] == [1, 1, 1, 3]


def test_full_set():
    sh = TreeShape(3, 3)
    con = path_construct(sh, sh.size)
    assert con.boundary() == 0 and con.case_schedule[0].s_i == 3


def test_needs_q_three_or_four():
    with pytest.raises(ValueError):
        path_construct(TreeShape(2, 3), 3)


@pytest.mark.parametrize("q,d", [(3, 5), (3, 6), (4, 4), (4, 5)])
def test_observations_every_size(q, d):
    sh = TreeShape(q, d)
    vals = phi_profile_dp(sh).values
    for s in range(1, sh.size):
        con = path_construct(sh, s)
        obs = con.observations()
        assert all(obs.values()), (s, obs)
        assert con.best_boundary() >= vals[s]
        if con.adjusted is not None:
            assert len(con.adjusted) == s


def test_json_dump():
    rec = json.loads(path_construct(TreeShape(4, 3), 30).to_json())
    assert rec["s"] == 30 and len(rec["S"]) == 30
    assert {"case_schedule", "S0", "S1", "S1p", "S2", "S_bar"} <= set(rec)


def test_sweep_and_threshold():
    rep = verify_path_construction(TreeShape(3, 5))
    assert rep.threshold_ok and rep.observations_ok
    assert rep.bound == upper_bound_q34(3, 5) == 6
    assert construction_threshold(4, range(2, 5)) == 2


def test_local_structure():
    r = local_structure_report(1, 1)
    assert r.phi_s == 1 and len(r.witness) == 1 and r.border == [0]
    r = local_structure_report(5, 178)
    assert len(r.witness) == 178 and len(r.border) == r.phi_s
    assert r.superset_best >= r.phi_next
    sh = TreeShape(3, 5)
    assert boundary_size(sh, np.isin(np.arange(sh.size), r.witness_next)) == r.phi_next
