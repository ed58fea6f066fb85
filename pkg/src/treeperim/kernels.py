"""Kernel dispatch: the compiled extension when it imports, numpy otherwise.

Set ``TREEPERIM_PURE=1`` to force the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

INF = _pykernels.INF

_compiled = None
if os.environ.get("TREEPERIM_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

impl = _compiled if _compiled is not None else _pykernels
BACKEND: str = impl.BACKEND

# Compiled neighbour buffers are fixed-size.
_MAX_COMPILED_Q = 62


def available_backends() -> dict[str, object]:
    out: dict[str, object] = {"python": _pykernels}
    if _compiled is not None:
        out["cython"] = _compiled
    return out


def _pick(q: int):
    return impl if q <= _MAX_COMPILED_Q else _pykernels


def minplus_conv(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return impl.minplus_conv(np.ascontiguousarray(a, dtype=np.int64), np.ascontiguousarray(b, dtype=np.int64))


def vs_subset_dp(nbr: np.ndarray) -> int:
    return impl.vs_subset_dp(np.ascontiguousarray(nbr, dtype=np.int64))


def down_scan(
    member: np.ndarray, q: int, n_int: int, levels: np.ndarray, tier: int, strict: bool = False
) -> tuple[int, int]:
    return _pick(q).down_scan(
        np.ascontiguousarray(member, dtype=np.uint8),
        q,
        n_int,
        np.ascontiguousarray(levels, dtype=np.int64),
        tier,
        strict,
    )


def down_candidates(
    member: np.ndarray, q: int, n_int: int, levels: np.ndarray, tier: int, strict: bool = False, limit: int = -1
) -> np.ndarray:
    return _pick(q).down_candidates(
        np.ascontiguousarray(member, dtype=np.uint8),
        q,
        n_int,
        np.ascontiguousarray(levels, dtype=np.int64),
        tier,
        strict,
        limit,
    )


def exchange_profile(member: np.ndarray, q: int, n_int: int, removals, additions) -> np.ndarray:
    return _pick(q).exchange_profile(
        np.ascontiguousarray(member, dtype=np.uint8),
        q,
        n_int,
        np.ascontiguousarray(removals, dtype=np.int64),
        np.ascontiguousarray(additions, dtype=np.int64),
    )
