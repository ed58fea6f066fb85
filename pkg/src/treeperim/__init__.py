"""Vertex isoperimetry on complete q-ary trees."""

from .tree import RootedTree, TreeShape, make_tree
from .vset import VertexSet, boundary

__all__ = ["RootedTree", "TreeShape", "VertexSet", "boundary", "make_tree"]
__version__ = "0.1.0"
