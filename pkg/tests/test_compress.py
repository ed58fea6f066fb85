import json

import numpy as np
import pytest

from treeperim.compress import (
    StepCapExceeded,
    aeolian_fix,
    aeolian_step,
    check_level_continuity,
    check_peak_order,
    check_trichotomy,
    down_fix,
    down_step,
    find_down_swappable,
    find_swappable,
    left_fix,
    left_step,
    treeswap,
)
from treeperim.oracle import dp_witness, phi_profile_dp
from treeperim.tree import TreeShape
from treeperim.vset import VertexSet, boundary_size, is_left_ordered


def vs(q, d, members):
    return VertexSet.from_members(TreeShape(q, d), members)


def border(S):
    return boundary_size(S.shape, S.member)


# left compression


def test_find_swappable():
    assert find_swappable(vs(2, 1, [2])) == (1, 2)
    assert find_swappable(vs(2, 2, [5])) == (1, 2)
    assert find_swappable(vs(2, 2, [1, 3, 4])) is None


def test_treeswap_small():
    S = vs(2, 2, [2, 5])
    T = treeswap(S, 1, 2)
    assert T.members() == [1, 3]
    assert border(S) == border(T) == 2


def test_treeswap_moves_whole_patterns():
    assert treeswap(vs(2, 3, [2, 4, 6, 8, 9]), 3, 4).members() == [2, 3, 6, 7, 10]


def test_treeswap_disjoint_is_identity():
    S = vs(2, 3, [1, 3])
    assert treeswap(S, 5, 6) == S


def test_treeswap_needs_same_level():
    with pytest.raises(ValueError):
        treeswap(vs(2, 2, [1]), 1, 3)


def test_left_fix_five_vertex_example():
    out, trace = left_fix(vs(2, 3, [2, 4, 6, 8, 9]))
    assert out.members() == [1, 3, 4, 7, 8]
    assert trace.terminated == "fixpoint"


def test_left_fix_fixed_point_has_empty_trace():
    S = vs(2, 3, [1, 3, 4, 7, 8])
    out, trace = left_fix(S)
    assert out == S and trace.steps == []


def test_left_fix_is_determined_by_level_counts():
    shaped = [1, 3, 4, 7, 8] + list(range(15, 24))
    rng = np.random.default_rng(5)
    sh = TreeShape(2, 4)
    for _ in range(5):
        pick = [1] + list(rng.choice([3, 4, 5, 6], 2, replace=False))
        pick += list(rng.choice(range(7, 15), 2, replace=False)) + list(rng.choice(range(15, 31), 9, replace=False))
        out, _ = left_fix(VertexSet.from_members(sh, pick))
        assert out.members() == shaped


def test_left_step_on_unordered_set():
    S2, step = left_step(vs(2, 2, [2, 5, 6]))
    assert S2.members() == [1, 3, 4]
    assert step.kind == "left-treeswap" and (step.u, step.v) == (1, 2)


# down compression


def test_down_swappable_examples():
    assert find_down_swappable(vs(2, 1, [0])) == (0, 1)
    assert find_down_swappable(vs(2, 1, [1])) is None
    assert find_down_swappable(VertexSet.full(TreeShape(2, 2))) is None


def test_down_step_drops_border():
    S2, step = down_step(vs(2, 1, [0]))
    assert step.boundary_before == 2 and step.boundary_after == 1


def test_down_fix_examples():
    assert down_fix(vs(2, 1, [0]))[0].members() == [1]
    assert down_fix(VertexSet.empty(TreeShape(2, 2)))[0].members() == []
    assert down_fix(vs(2, 3, [1, 3, 4, 7, 8]))[0].members() == [3, 7, 8, 9, 10]


# aeolian compression


def test_aeolian_step_prefers_left_step():
    S2, step = aeolian_step(vs(2, 2, [2, 5, 6]))
    assert S2.members() == [1, 3, 4]


def test_aeolian_step_on_all_leaves():
    S = vs(2, 3, range(7, 15))
    S2, step = aeolian_step(S)
    assert step.kind == "aeolian-move"
    assert border(S2) < border(S)
    out, trace = aeolian_fix(S)
    assert len(out) == 8 and border(out) <= border(S2)
    assert all(st.boundary_after <= st.boundary_before for st in trace.steps)


def test_aeolian_fix_empty():
    assert aeolian_fix(VertexSet.empty(TreeShape(3, 2)))[0].members() == []


@pytest.mark.parametrize("q,d", [(3, 3), (2, 5)])
def test_aeolian_fix_keeps_optimum(q, d):
    sh = TreeShape(q, d)
    vals = phi_profile_dp(sh).values
    for s in range(0, sh.size + 1, 3):
        out, _ = aeolian_fix(dp_witness(sh, s))
        assert border(out) == vals[s]
        assert check_trichotomy(out)[0] and check_peak_order(out)[0]


def test_step_cap():
    with pytest.raises(StepCapExceeded) as exc:
        left_fix(vs(2, 3, [2, 4, 6, 8, 9]), max_steps=1)
    assert exc.value.trace.terminated == "step-cap"
    assert len(exc.value.trace.steps) == 1


def test_step_cap_env(monkeypatch):
    monkeypatch.setenv("TREEPERIM_MAX_STEPS", "1")
    with pytest.raises(StepCapExceeded):
        left_fix(vs(2, 3, [2, 4, 6, 8, 9]))


def test_trace_jsonl():
    _, trace = left_fix(vs(2, 3, [2, 4, 6, 8, 9]))
    rows = [json.loads(x) for x in trace.to_jsonl().splitlines()]
    assert rows and set(rows[0]) == {"kind", "u", "v", "moved", "boundary_before", "boundary_after"}


# structural checkers


def test_trichotomy_examples():
    assert check_trichotomy(vs(2, 1, [0])) == (False, 0)
    # full subtree below u
    assert check_trichotomy(vs(4, 2, [1, 5, 6, 7, 8]))[0]
    # one child out, and that child has a child out
    assert check_trichotomy(vs(4, 3, [1, 5, 6, 7, 33, 34] + list(range(21, 33))))[0]


def test_trichotomy_after_down_fix_on_parents_of_leaves():
    sh = TreeShape(3, 3)
    S = VertexSet.from_members(sh, sh.level_range(2))
    out, _ = down_fix(S)
    assert check_trichotomy(out)[0]


def test_peak_order_examples():
    assert check_peak_order(vs(2, 2, [3, 5])) == (False, (1, 2))
    assert check_peak_order(VertexSet.empty(TreeShape(2, 2)))[0]
    assert check_peak_order(vs(2, 2, [4]))[0]


def test_level_continuity():
    assert check_level_continuity(vs(2, 2, [1, 3]))[0]
    assert check_level_continuity(vs(2, 2, [1])) == (False, 0)


def test_random_pipeline_postconditions():
    rng = np.random.default_rng(11)
    for q, d in [(2, 3), (3, 3), (4, 2)]:
        sh = TreeShape(q, d)
        for _ in range(15):
            S = VertexSet.random(sh, rng)
            assert is_left_ordered(left_fix(S)[0])[0]
            assert find_down_swappable(down_fix(S)[0]) is None
            A = aeolian_fix(S)[0]
            assert len(A) == len(S) and border(A) <= border(S)
