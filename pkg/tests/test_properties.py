"""Property-based checks over random shapes and sets."""

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from treeperim.compress import (
    aeolian_fix,
    check_peak_order,
    check_trichotomy,
    down_fix,
    find_down_swappable,
    left_fix,
    treeswap,
)
from treeperim.oracle import phi_profile_dp, profile_bruteforce, profile_rooted
from treeperim.sep import Layout, tree_pathwidth, vs_exact, vs_of_layout
from treeperim.tree import RootedTree, TreeShape
from treeperim.vset import VertexSet, boundary_size, is_left_ordered

SMALL = [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2)]


@st.composite
def vertex_sets(draw, shapes=SMALL):
    q, d = draw(st.sampled_from(shapes))
    sh = TreeShape(q, d)
    bits = draw(st.lists(st.booleans(), min_size=sh.size, max_size=sh.size))
    return VertexSet(sh, np.array(bits, dtype=bool))


@st.composite
def rooted_trees(draw, nmax=12):
    n = draw(st.integers(1, nmax))
    parent = [-1] + [draw(st.integers(0, i - 1)) for i in range(1, n)]
    return RootedTree(parent)


def border(S):
    return boundary_size(S.shape, S.member)


@given(vertex_sets())
def test_left_fix_properties(S):
    out, trace = left_fix(S)
    assert len(out) == len(S) and border(out) <= border(S)
    assert out.level_counts() == S.level_counts()
    assert is_left_ordered(out)[0]


@given(vertex_sets())
def test_down_fix_properties(S):
    out, trace = down_fix(S)
    assert len(out) == len(S) and border(out) <= border(S)
    assert find_down_swappable(out) is None


@given(vertex_sets())
def test_aeolian_fix_properties(S):
    out, trace = aeolian_fix(S)
    assert len(out) == len(S)
    assert all(st_.boundary_after <= st_.boundary_before for st_ in trace.steps)
    assert check_trichotomy(out)[0] and check_peak_order(out)[0]


@given(vertex_sets(), st.data())
def test_treeswap_is_involution(S, data):
    sh = S.shape
    i = data.draw(st.integers(0, sh.d))
    lo, hi = sh.level_start[i], sh.level_start[i + 1]
    u = data.draw(st.integers(lo, hi - 1))
    v = data.draw(st.integers(lo, hi - 1))
    T = treeswap(S, u, v)
    assert len(T) == len(S) and treeswap(T, u, v) == S


@given(vertex_sets())
def test_dp_is_a_floor(S):
    assert phi_profile_dp(S.shape).values[len(S)] <= border(S)


@given(rooted_trees())
def test_rooted_profile_matches_enumeration(t):
    assert np.array_equal(profile_rooted(t), profile_bruteforce(t))


@given(rooted_trees(), st.randoms(use_true_random=False))
def test_separation_facts(t, rnd):
    order = list(range(t.n))
    rnd.shuffle(order)
    pw = tree_pathwidth(t)
    assert pw == vs_exact(t)
    assert vs_of_layout(t, Layout(tuple(order))) >= pw >= int(profile_rooted(t).max())
