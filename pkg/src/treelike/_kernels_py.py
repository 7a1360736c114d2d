"""Pure-Python implementations of the hot loops.

Same signatures and results as the compiled ``_ckernels`` module; used when
the extension is not built.  See :mod:`treelike.kernels`.
"""

from __future__ import annotations

import numpy as np


def bnb_min_inflections(blocks, undirected, deg, leaving, last_side, forced,
                        next_leaf, prefix, tail_rev, last_leaf):
    """Branch and bound over side signs (0 = outward, 1 = inward).

    ``undirected[j]`` marks passage ``j`` (side ``j`` -> side ``j+1``).
    ``prefix[j]`` is the product of passage flips before ``j`` (+1/-1), used for
    the parity bound on the unassigned tail.  Returns ``(best, witness)``
    where ``witness`` is the lexicographically least optimum.
    """
    m = len(blocks)
    n = len(deg)
    sigma = [1] * m
    plus = [0] * n
    best = [m + 1]
    witness = [None]
    total_flip = prefix[m]

    def infl(j):
        a, b = sigma[j], sigma[(j + 1) % m]
        return (a == b) if undirected[j] else (a != b)

    def tail_bound(i):
        s0 = sigma[0]
        L = next_leaf[i]
        if L >= m:
            return 1 if s0 != prefix[i] * total_flip * sigma[i] else 0
        bound = 1 if 1 != prefix[i] * prefix[L] * sigma[i] else 0
        bound += tail_rev[L]
        return bound + (1 if s0 != prefix[last_leaf] * total_flip else 0)

    def dfs(i, count):
        v = blocks[i]
        for bit in (0, 1):
            if bit and forced[i]:
                continue
            s = 1 - 2 * bit
            sigma[i] = s
            c = count + (infl(i - 1) if i else 0)
            if s == 1:
                plus[v] += 1
            ok = True
            if last_side[v] == i:
                k = deg[v]
                if k == 2 and plus[v] == 0:
                    ok = False
                elif k != 2 and plus[v] == 0 and leaving[v] > k - 3:
                    ok = False
            if ok:
                if i == m - 1:
                    total = c + infl(m - 1)
                    if total < best[0]:
                        best[0] = total
                        witness[0] = list(sigma)
                elif c + tail_bound(i) < best[0]:
                    dfs(i + 1, c)
            if s == 1:
                plus[v] -= 1

    dfs(0, 0)
    w = np.array([0 if x == 1 else 1 for x in witness[0]], dtype=np.uint8)
    return best[0], w


def count_fixed_ncpd(parent, orbit_of, allowed):
    """Count noncolliding maps constant on edge orbits.

    Vertices are in preorder with ``parent[0] == -1``; the edge above vertex
    ``v`` takes state 0 (undirected), 1 (parent -> v) or 2 (v -> parent),
    shared by every edge in orbit ``orbit_of[v]``.  ``allowed[o]`` is a
    bitmask of admissible states for orbit ``o``.
    """
    n = len(parent)
    if n == 1:
        return 1
    choices = [[s for s in range(3) if allowed[o] >> s & 1] for o in range(len(allowed))]
    if any(not c for c in choices):
        return 0
    digits = [0] * len(choices)
    bad = [0] * n
    count = 0
    while True:
        ups = 0
        for v in range(1, n):
            if choices[orbit_of[v]][digits[orbit_of[v]]] == 2:
                ups += 1
        bad[0] = ups
        ok = ups == 0
        for v in range(1, n):
            s = choices[orbit_of[v]][digits[orbit_of[v]]]
            b = bad[parent[v]] + (1 if s == 1 else -1 if s == 2 else 0)
            bad[v] = b
            if b == 0:
                ok = True
        if ok:
            count += 1
        o = 0
        while o < len(digits):
            digits[o] += 1
            if digits[o] < len(choices[o]):
                break
            digits[o] = 0
            o += 1
        if o == len(digits):
            return count


def segment_crossings(xy, tol=1e-9):
    """All proper crossings between non-adjacent segments of a closed polyline.

    Returns ``(i, j, ti, tj, sin_angle, parallel_hits)``: segment indices with
    ``i < j``, the parameters along each, and the sine of the crossing angle.
    """
    p = np.asarray(xy, dtype=float)
    N = len(p)
    q = np.roll(p, -1, axis=0)
    d = q - p
    lo = np.minimum(p, q)
    hi = np.maximum(p, q)
    out_i, out_j, out_ti, out_tj, out_s = [], [], [], [], []
    parallel = 0
    order = np.argsort(lo[:, 0], kind="stable")
    start_x = lo[order, 0]
    for rank, i in enumerate(order):
        # candidates: later in sweep order and starting before i ends
        stop = np.searchsorted(start_x, hi[i, 0] + tol, side="right")
        cand = order[rank + 1:stop]
        if len(cand) == 0:
            continue
        cand = cand[(lo[cand, 1] <= hi[i, 1] + tol) & (hi[cand, 1] >= lo[i, 1] - tol)]
        adjacent = (np.abs(cand - i) == 1) | (np.abs(cand - i) == N - 1)
        cand = cand[~adjacent]
        if len(cand) == 0:
            continue
        r = p[cand] - p[i]
        den = d[i, 0] * d[cand, 1] - d[i, 1] * d[cand, 0]
        li = np.hypot(*d[i])
        lj = np.hypot(d[cand, 0], d[cand, 1])
        par = np.abs(den) <= 1e-12 * li * lj
        if par.any():
            cross_r = d[i, 0] * r[par, 1] - d[i, 1] * r[par, 0]
            parallel += int(np.count_nonzero(np.abs(cross_r) <= tol * li))
        den_safe = np.where(par, 1.0, den)
        ti = (r[:, 0] * d[cand, 1] - r[:, 1] * d[cand, 0]) / den_safe
        tj = (r[:, 0] * d[i, 1] - r[:, 1] * d[i, 0]) / den_safe
        eps_i = tol / li
        eps_j = tol / lj
        hit = (~par) & (ti >= -eps_i) & (ti <= 1 + eps_i) & (tj >= -eps_j) & (tj <= 1 + eps_j)
        for k in np.nonzero(hit)[0]:
            j = int(cand[k])
            a, b, ta, tb = (int(i), j, ti[k], tj[k]) if i < j else (j, int(i), tj[k], ti[k])
            out_i.append(a)
            out_j.append(b)
            out_ti.append(float(ta))
            out_tj.append(float(tb))
            out_s.append(float(abs(den[k]) / (li * lj[k])))
    return (np.array(out_i, dtype=np.int64), np.array(out_j, dtype=np.int64),
            np.array(out_ti), np.array(out_tj), np.array(out_s), parallel)
