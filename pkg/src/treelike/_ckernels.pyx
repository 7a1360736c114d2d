# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops; mirrors ``_kernels_py`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


cdef struct Search:
    int m
    int best
    int total_flip
    int last_leaf
    int* blocks
    int* undirected
    int* deg
    int* leaving
    int* last_side
    int* forced
    int* next_leaf
    int* prefix
    int* tail_rev
    int* sigma
    int* plus
    int* witness


cdef inline int _infl(Search* S, int j) nogil:
    cdef int a = S.sigma[j]
    cdef int b = S.sigma[(j + 1) % S.m]
    if S.undirected[j]:
        return 1 if a == b else 0
    return 1 if a != b else 0


cdef inline int _tail_bound(Search* S, int i) nogil:
    cdef int s0 = S.sigma[0]
    cdef int L = S.next_leaf[i]
    cdef int bound
    if L >= S.m:
        return 1 if s0 != S.prefix[i] * S.total_flip * S.sigma[i] else 0
    bound = 1 if 1 != S.prefix[i] * S.prefix[L] * S.sigma[i] else 0
    bound += S.tail_rev[L]
    if s0 != S.prefix[S.last_leaf] * S.total_flip:
        bound += 1
    return bound


cdef void _dfs(Search* S, int i, int count) nogil:
    cdef int v = S.blocks[i]
    cdef int bit, s, c, ok, k, total, q
    for bit in range(2):
        if bit and S.forced[i]:
            continue
        s = 1 - 2 * bit
        S.sigma[i] = s
        c = count
        if i > 0:
            c += _infl(S, i - 1)
        if s == 1:
            S.plus[v] += 1
        ok = 1
        if S.last_side[v] == i:
            k = S.deg[v]
            if k == 2 and S.plus[v] == 0:
                ok = 0
            elif k != 2 and S.plus[v] == 0 and S.leaving[v] > k - 3:
                ok = 0
        if ok:
            if i == S.m - 1:
                total = c + _infl(S, S.m - 1)
                if total < S.best:
                    S.best = total
                    for q in range(S.m):
                        S.witness[q] = S.sigma[q]
            elif c + _tail_bound(S, i) < S.best:
                _dfs(S, i + 1, c)
        if s == 1:
            S.plus[v] -= 1


def bnb_min_inflections(blocks, undirected, deg, leaving, last_side, forced,
                        next_leaf, prefix, tail_rev, last_leaf):
    cdef int[::1] b = np.ascontiguousarray(blocks, dtype=np.int32)
    cdef int[::1] u = np.ascontiguousarray(undirected, dtype=np.int32)
    cdef int[::1] dg = np.ascontiguousarray(deg, dtype=np.int32)
    cdef int[::1] lv = np.ascontiguousarray(leaving, dtype=np.int32)
    cdef int[::1] ls = np.ascontiguousarray(last_side, dtype=np.int32)
    cdef int[::1] fo = np.ascontiguousarray(forced, dtype=np.int32)
    cdef int[::1] nl = np.ascontiguousarray(next_leaf, dtype=np.int32)
    cdef int[::1] pf = np.ascontiguousarray(prefix, dtype=np.int32)
    cdef int[::1] tr = np.ascontiguousarray(tail_rev, dtype=np.int32)
    cdef int m = b.shape[0]
    cdef int[::1] sigma = np.ones(m, dtype=np.int32)
    cdef int[::1] plus = np.zeros(dg.shape[0], dtype=np.int32)
    cdef int[::1] wit = np.ones(m, dtype=np.int32)
    cdef Search S
    S.m = m
    S.best = m + 1
    S.total_flip = pf[m]
    S.last_leaf = last_leaf
    S.blocks = &b[0]
    S.undirected = &u[0]
    S.deg = &dg[0]
    S.leaving = &lv[0]
    S.last_side = &ls[0]
    S.forced = &fo[0]
    S.next_leaf = &nl[0]
    S.prefix = &pf[0]
    S.tail_rev = &tr[0]
    S.sigma = &sigma[0]
    S.plus = &plus[0]
    S.witness = &wit[0]
    with nogil:
        _dfs(&S, 0, 0)
    w = np.asarray(wit)
    return S.best, (w != 1).astype(np.uint8)


def count_fixed_ncpd(parent, orbit_of, allowed):
    cdef int[::1] par = np.ascontiguousarray(parent, dtype=np.int32)
    cdef int[::1] orb = np.ascontiguousarray(orbit_of, dtype=np.int32)
    cdef int n = par.shape[0]
    cdef int n_orb = len(allowed)
    if n == 1:
        return 1
    cdef int[:, ::1] choices = np.zeros((max(n_orb, 1), 3), dtype=np.int32)
    cdef int[::1] n_choice = np.zeros(max(n_orb, 1), dtype=np.int32)
    cdef int o, s, v, ups, ok, bb, c
    for o in range(n_orb):
        c = 0
        for s in range(3):
            if (int(allowed[o]) >> s) & 1:
                choices[o, c] = s
                c += 1
        if c == 0:
            return 0
        n_choice[o] = c
    cdef int[::1] digits = np.zeros(max(n_orb, 1), dtype=np.int32)
    cdef int[::1] state = np.zeros(n, dtype=np.int32)
    cdef int[::1] bad = np.zeros(n, dtype=np.int32)
    cdef long long count = 0
    with nogil:
        while True:
            ups = 0
            for v in range(1, n):
                o = orb[v]
                s = choices[o, digits[o]]
                state[v] = s
                if s == 2:
                    ups += 1
            bad[0] = ups
            ok = 1 if ups == 0 else 0
            for v in range(1, n):
                s = state[v]
                bb = bad[par[v]]
                if s == 1:
                    bb += 1
                elif s == 2:
                    bb -= 1
                bad[v] = bb
                if bb == 0:
                    ok = 1
            count += ok
            o = 0
            while o < n_orb:
                digits[o] += 1
                if digits[o] < n_choice[o]:
                    break
                digits[o] = 0
                o += 1
            if o == n_orb:
                break
    return count


def segment_crossings(xy, double tol=1e-9):
    cdef double[:, ::1] p = np.ascontiguousarray(xy, dtype=np.float64)
    cdef Py_ssize_t N = p.shape[0]
    cdef double[:, ::1] q = np.ascontiguousarray(np.roll(np.asarray(p), -1, axis=0))
    lo_np = np.minimum(np.asarray(p), np.asarray(q))
    hi_np = np.maximum(np.asarray(p), np.asarray(q))
    cdef double[:, ::1] lo = np.ascontiguousarray(lo_np)
    cdef double[:, ::1] hi = np.ascontiguousarray(hi_np)
    cdef long[::1] order = np.ascontiguousarray(np.argsort(lo_np[:, 0], kind="stable"), dtype=np.int64)
    out_i, out_j, out_ti, out_tj, out_s = [], [], [], [], []
    cdef Py_ssize_t ra, rb, i, j, gap
    cdef double dix, diy, djx, djy, rx, ry, den, li, lj, ti, tj, eps_i, eps_j
    cdef int parallel = 0
    for ra in range(N):
        i = order[ra]
        dix = q[i, 0] - p[i, 0]
        diy = q[i, 1] - p[i, 1]
        li = sqrt(dix * dix + diy * diy)
        for rb in range(ra + 1, N):
            j = order[rb]
            if lo[j, 0] > hi[i, 0] + tol:
                break
            if lo[j, 1] > hi[i, 1] + tol or hi[j, 1] < lo[i, 1] - tol:
                continue
            gap = i - j if i > j else j - i
            if gap == 1 or gap == N - 1:
                continue
            djx = q[j, 0] - p[j, 0]
            djy = q[j, 1] - p[j, 1]
            lj = sqrt(djx * djx + djy * djy)
            rx = p[j, 0] - p[i, 0]
            ry = p[j, 1] - p[i, 1]
            den = dix * djy - diy * djx
            if fabs(den) <= 1e-12 * li * lj:
                if fabs(dix * ry - diy * rx) <= tol * li:
                    parallel += 1
                continue
            ti = (rx * djy - ry * djx) / den
            tj = (rx * diy - ry * dix) / den
            eps_i = tol / li
            eps_j = tol / lj
            if ti < -eps_i or ti > 1 + eps_i or tj < -eps_j or tj > 1 + eps_j:
                continue
            if i < j:
                out_i.append(i); out_j.append(j); out_ti.append(ti); out_tj.append(tj)
            else:
                out_i.append(j); out_j.append(i); out_ti.append(tj); out_tj.append(ti)
            out_s.append(fabs(den) / (li * lj))
    return (np.array(out_i, dtype=np.int64), np.array(out_j, dtype=np.int64),
            np.array(out_ti, dtype=np.float64), np.array(out_tj, dtype=np.float64),
            np.array(out_s, dtype=np.float64), parallel)
