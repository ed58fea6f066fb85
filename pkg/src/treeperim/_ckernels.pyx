# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Every function mirrors one in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint8_t

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

cdef int64_t INF = 1 << 40

BACKEND = "cython"


def minplus_conv(const int64_t[::1] a, const int64_t[::1] b):
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0], i, j
    cdef int64_t ai, s
    cdef const int64_t* bp = &b[0]
    cdef int64_t* op
    out_arr = np.full(na + nb - 1, INF, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    with nogil:
        for i in range(na):
            ai = a[i]
            if ai >= INF:
                continue
            op = &out[i]
            # branch-free so the compiler can vectorise; INF sums are clamped below
            for j in range(nb):
                s = ai + bp[j]
                op[j] = s if s < op[j] else op[j]
        for i in range(na + nb - 1):
            if out[i] > INF:
                out[i] = INF
    return out_arr


def vs_subset_dp(const int64_t[::1] nbr):
    cdef int n = nbr.shape[0]
    cdef unsigned long long N = 1ULL << n, S, T, low, full = N - 1
    cdef int best, bd, val
    nbm_arr = np.zeros(N, dtype=np.int64)
    f_arr = np.zeros(N, dtype=np.uint8)
    cdef int64_t[::1] nbm = nbm_arr
    cdef uint8_t[::1] f = f_arr
    with nogil:
        for S in range(1, N):
            low = S & (~S + 1)
            nbm[S] = nbm[S ^ low] | nbr[__builtin_ctzll(low)]
            bd = __builtin_popcountll(<unsigned long long>nbm[S] & ~S & full)
            best = 255
            T = S
            while T:
                low = T & (~T + 1)
                val = f[S ^ low]
                if val < best:
                    best = val
                T ^= low
            f[S] = best if best > bd else bd
    return int(f[N - 1])


cdef inline bint _status(const uint8_t* member, const int64_t* cnt, Py_ssize_t w) nogil:
    return (not member[w]) and cnt[w] > 0


cdef void _neighbors(Py_ssize_t v, int q, Py_ssize_t n_int, Py_ssize_t* nb, int* k) nogil:
    cdef int j
    k[0] = 0
    if v > 0:
        nb[0] = (v - 1) // q
        k[0] = 1
    if v < n_int:
        for j in range(q):
            nb[k[0]] = q * v + 1 + j
            k[0] += 1


cdef int64_t _toggle(uint8_t* member, int64_t* cnt, Py_ssize_t v, int q, Py_ssize_t n_int,
                     Py_ssize_t* nb) nogil:
    """Flip membership of v; returns the change in border size."""
    cdef int k, j
    cdef int64_t before = 0, after = 0, step
    _neighbors(v, q, n_int, nb, &k)
    before = _status(member, cnt, v)
    for j in range(k):
        before += _status(member, cnt, nb[j])
    step = -1 if member[v] else 1
    member[v] = 0 if member[v] else 1
    for j in range(k):
        cnt[nb[j]] += step
    after = _status(member, cnt, v)
    for j in range(k):
        after += _status(member, cnt, nb[j])
    return after - before


def _counts(uint8_t[::1] member, int q, Py_ssize_t n_int):
    cdef Py_ssize_t n = member.shape[0], v
    cnt_arr = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] cnt = cnt_arr
    for v in range(1, n):
        if member[v]:
            cnt[(v - 1) // q] += 1
    for v in range(n_int):
        if member[v]:
            for j in range(q):
                cnt[q * v + 1 + j] += 1
    return cnt_arr


cdef inline int64_t _add_delta(const uint8_t* member, const int64_t* cnt, Py_ssize_t v, int q,
                               Py_ssize_t n_int, Py_ssize_t* nb) nogil:
    """Border change from adding non-member v, without mutating anything."""
    cdef int k, j
    cdef int64_t delta = -1 if cnt[v] > 0 else 0
    _neighbors(v, q, n_int, nb, &k)
    for j in range(k):
        if not member[nb[j]] and cnt[nb[j]] == 0:
            delta += 1
    return delta


def down_candidates(uint8_t[::1] member_in, int q, Py_ssize_t n_int, const int64_t[::1] levels, int tier,
                    bint strict=False, Py_ssize_t limit=-1):
    """Down-swappable pairs (u, v) in (u, v) order, as an (k, 2) array.

    tier 1 restricts v to Desc(u); tier 2 scans every v outside Desc(u).
    With ``strict`` only border-reducing exchanges qualify. ``limit`` caps k
    (negative means no cap).
    """
    cdef Py_ssize_t n = member_in.shape[0], u, v, w, lo, width, k = 0, cap = 256
    cdef int64_t base = 0, bu, new
    cdef Py_ssize_t nb[64]
    cdef int depth, d = levels[n - 1]
    member_arr = np.array(member_in, dtype=np.uint8)
    cdef uint8_t[::1] member = member_arr
    cdef int64_t[::1] cnt = _counts(member, q, n_int)
    cdef uint8_t* mp = &member[0]
    cdef int64_t* cp = &cnt[0]
    buf_arr = np.empty((cap, 2), dtype=np.int64)
    cdef int64_t[:, ::1] buf = buf_arr
    for w in range(n):
        base += _status(mp, cp, w)
    for u in range(n):
        if not member[u]:
            continue
        bu = base + _toggle(mp, cp, u, q, n_int, nb)
        lo = u
        width = 1
        depth = levels[u]
        for v in range(u if tier == 1 else 0, n):
            if tier == 1:
                # walk Desc(u) level by level
                if v >= lo + width:
                    if depth == d:
                        break
                    lo = q * lo + 1
                    width *= q
                    depth += 1
                if v < lo:
                    continue
            elif _is_desc(v, u, q):
                continue
            if member[v] or v == u:
                continue
            new = bu + _add_delta(mp, cp, v, q, n_int, nb)
            if new < base or (not strict and new == base and levels[v] > levels[u]):
                if k == cap:
                    cap *= 2
                    buf_arr = np.resize(buf_arr, (cap, 2))
                    buf = buf_arr
                buf[k, 0] = u
                buf[k, 1] = v
                k += 1
        _toggle(mp, cp, u, q, n_int, nb)
        if 0 <= limit <= k:
            break
    out = buf_arr[:k].copy()
    return out[:limit] if limit >= 0 else out


def down_scan(uint8_t[::1] member_in, int q, Py_ssize_t n_int, const int64_t[::1] levels, int tier,
              bint strict=False):
    """First down-swappable pair, or (-1, -1)."""
    pairs = down_candidates(member_in, q, n_int, levels, tier, strict, 1)
    if pairs.shape[0]:
        return int(pairs[0, 0]), int(pairs[0, 1])
    return -1, -1


cdef inline bint _is_desc(Py_ssize_t v, Py_ssize_t u, int q) nogil:
    while v > u:
        v = (v - 1) // q
    return v == u


def exchange_profile(uint8_t[::1] member_in, int q, Py_ssize_t n_int,
                     const int64_t[::1] removals, const int64_t[::1] additions):
    """Border sizes after removing removals[:m] and adding additions[:m], for m = 0..M."""
    cdef Py_ssize_t n = member_in.shape[0], w, m
    cdef Py_ssize_t M = min(removals.shape[0], additions.shape[0])
    cdef Py_ssize_t nb[64]
    cdef int64_t cur = 0
    member_arr = np.array(member_in, dtype=np.uint8)
    cdef uint8_t[::1] member = member_arr
    cdef int64_t[::1] cnt = _counts(member, q, n_int)
    cdef uint8_t* mp = &member[0]
    cdef int64_t* cp = &cnt[0]
    out_arr = np.empty(M + 1, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    for w in range(n):
        cur += _status(mp, cp, w)
    out[0] = cur
    for m in range(M):
        cur += _toggle(mp, cp, removals[m], q, n_int, nb)
        cur += _toggle(mp, cp, additions[m], q, n_int, nb)
        out[m + 1] = cur
    return out_arr
