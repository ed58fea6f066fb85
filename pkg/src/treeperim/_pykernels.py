"""Pure numpy versions of the compiled kernels (same signatures, same results)."""

from __future__ import annotations

import numpy as np

INF = 1 << 40
BACKEND = "python"


def minplus_conv(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.size < b.size:
        a, b = b, a
    out = np.full(a.size + b.size - 1, INF, dtype=np.int64)
    for j in np.flatnonzero(b < INF):
        seg = out[j : j + a.size]
        np.minimum(seg, a + b[j], out=seg)
    np.minimum(out, INF, out=out)
    return out


def vs_subset_dp(nbr: np.ndarray) -> int:
    n = int(nbr.size)
    N = 1 << n
    nbm = np.zeros(N, dtype=np.int64)
    for k in range(n):
        nbm[1 << k : 1 << (k + 1)] = nbm[: 1 << k] | int(nbr[k])
    states = np.arange(N, dtype=np.int64)
    border = np.bitwise_count(nbm & ~states).astype(np.int64)
    pop = np.bitwise_count(states)
    f = np.zeros(N, dtype=np.int64)
    for k in range(1, n + 1):
        layer = states[pop == k]
        best = np.full(layer.size, n + 1, dtype=np.int64)
        for v in range(n):
            bit = 1 << v
            has = (layer & bit) != 0
            np.minimum(best, np.where(has, f[layer ^ bit], n + 1), out=best)
        f[layer] = np.maximum(best, border[layer])
    return int(f[N - 1])


def _neighbor_counts(member: np.ndarray, q: int, n_int: int) -> np.ndarray:
    m = member.astype(np.int64)
    cnt = np.zeros(m.size, dtype=np.int64)
    if n_int:
        cnt[:n_int] = m[1:].reshape(n_int, q).sum(axis=1)
        cnt[1:] += np.repeat(m[:n_int], q)
    return cnt


def _border(member: np.ndarray, cnt: np.ndarray) -> np.ndarray:
    return (~member) & (cnt > 0)


def _neighbor_sum(flags: np.ndarray, q: int, n_int: int) -> np.ndarray:
    """For every vertex, how many of its neighbours carry the flag."""
    f = flags.astype(np.int64)
    out = np.zeros(f.size, dtype=np.int64)
    if n_int:
        out[:n_int] = f[1:].reshape(n_int, q).sum(axis=1)
        out[1:] += np.repeat(f[:n_int], q)
    return out


def _desc_mask(u: int, q: int, n: int) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    lo, width = u, 1
    while lo < n:
        mask[lo : lo + width] = True
        lo, width = q * lo + 1, width * q
    return mask


def down_candidates(
    member_in: np.ndarray,
    q: int,
    n_int: int,
    levels: np.ndarray,
    tier: int,
    strict: bool = False,
    limit: int = -1,
) -> np.ndarray:
    member = np.asarray(member_in, dtype=bool)
    n = member.size
    cnt = _neighbor_counts(member, q, n_int)
    base = int(np.count_nonzero(_border(member, cnt)))
    found: list[np.ndarray] = []
    total = 0
    for u in np.flatnonzero(member).tolist():
        mu = member.copy()
        mu[u] = False
        cu = cnt.copy()
        if u > 0:
            cu[(u - 1) // q] -= 1
        if u < n_int:
            cu[q * u + 1 : q * u + 1 + q] -= 1
        bmask = _border(mu, cu)
        bu = int(np.count_nonzero(bmask))
        clean = (~mu) & (cu == 0)
        new = bu - bmask.astype(np.int64) + _neighbor_sum(clean, q, n_int)
        tie = np.zeros_like(member) if strict else (new == base) & (levels > levels[u])
        ok = (~member) & ((new < base) | tie)
        ok[u] = False
        desc = _desc_mask(u, q, n)
        ok &= desc if tier == 1 else ~desc
        vs = np.flatnonzero(ok)
        if vs.size:
            found.append(np.column_stack([np.full(vs.size, u, dtype=np.int64), vs.astype(np.int64)]))
            total += vs.size
        if 0 <= limit <= total:
            break
    out = np.concatenate(found) if found else np.zeros((0, 2), dtype=np.int64)
    return out[:limit] if limit >= 0 else out


def down_scan(
    member_in: np.ndarray, q: int, n_int: int, levels: np.ndarray, tier: int, strict: bool = False
) -> tuple[int, int]:
    pairs = down_candidates(member_in, q, n_int, levels, tier, strict, 1)
    if pairs.shape[0]:
        return int(pairs[0, 0]), int(pairs[0, 1])
    return -1, -1


def exchange_profile(member_in: np.ndarray, q: int, n_int: int, removals: np.ndarray, additions: np.ndarray) -> np.ndarray:
    member = np.asarray(member_in, dtype=bool).copy()
    M = min(len(removals), len(additions))
    out = np.empty(M + 1, dtype=np.int64)
    out[0] = int(np.count_nonzero(_border(member, _neighbor_counts(member, q, n_int))))
    for m in range(M):
        member[removals[m]] = False
        member[additions[m]] = True
        out[m + 1] = int(np.count_nonzero(_border(member, _neighbor_counts(member, q, n_int))))
    return out
