import numpy as np
import pytest

from treeperim.tree import (
    MAX_VERTICES,
    RootedTree,
    TreeShape,
    descendants,
    index_queries,
    make_tree,
    subtree_sizes_by_level,
    t_of,
)


@pytest.mark.parametrize("q,d,n", [(2, 3, 15), (5, 0, 1), (3, 5, 364)])
def test_sizes(q, d, n):
    assert make_tree(q, d).size == n


def test_levels_hold_q_to_the_i():
    sh = TreeShape(3, 4)
    assert [len(sh.level_range(i)) for i in range(5)] == [1, 3, 9, 27, 81]
    assert np.bincount(sh.levels_array()).tolist() == [1, 3, 9, 27, 81]


@pytest.mark.parametrize("q,d,i,t", [(3, 5, 3, 13), (2, 4, 4, 1), (5, 2, 1, 6)])
def test_t_of(q, d, i, t):
    assert t_of(TreeShape(q, d), i) == t


def test_t_out_of_range():
    with pytest.raises(ValueError):
        TreeShape(2, 2).t(3)


def test_index_queries():
    sh = TreeShape(2, 2)
    assert index_queries(sh, 0) == (0, None, [1, 2], False)
    assert index_queries(sh, 5) == (2, 2, [], True)
    assert index_queries(TreeShape(3, 1), 2) == (1, 0, [], True)


def test_descendants():
    sh = TreeShape(2, 2)
    assert descendants(sh, 1) == [1, 3, 4]
    assert descendants(sh, 0) == list(range(7))
    assert descendants(sh, 6) == [6]


def test_children_of_left_vertex_come_first():
    sh = TreeShape(3, 3)
    for i in range(sh.d):
        kids = [c for v in sh.level_range(i) for c in sh.children(v)]
        assert kids == list(sh.level_range(i + 1))


def test_bad_shapes():
    with pytest.raises(ValueError):
        TreeShape(1, 3)
    with pytest.raises(ValueError):
        TreeShape(2, -1)
    with pytest.raises(OverflowError):
        TreeShape(2, 41)
    assert TreeShape(2, 39).size <= MAX_VERTICES


def test_vertex_checks():
    sh = TreeShape(2, 2)
    with pytest.raises(IndexError):
        sh.level(7)
    with pytest.raises(ValueError):
        sh.child(0, 3)
    with pytest.raises(ValueError):
        sh.child(4, 1)


def test_subtree_sizes_by_level():
    assert subtree_sizes_by_level(TreeShape(3, 2)) == [13, 4, 1]


def test_rooted_tree_validation():
    with pytest.raises(ValueError):
        RootedTree([-1, -1])
    with pytest.raises(ValueError):
        RootedTree([-1, 2, 1])
    with pytest.raises(ValueError):
        RootedTree([-1, 5])
    t = RootedTree.star(3)
    assert t.neighbors(0) == [1, 2, 3]
    assert len(t.edges()) == 3


def test_to_rooted_matches_shape():
    sh = TreeShape(3, 2)
    t = sh.to_rooted()
    assert all(t.children[v] == sh.children(v) for v in range(sh.size))
