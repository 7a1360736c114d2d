"""Inflection points of tree-like curves.

Sides of a curve are indexed by position in :func:`treelike.tree.traversal`.
A local coorientation assigns each side ``+1`` (outward w.r.t. its block) or
``-1`` (inward).  Passing through a double point, the coorientation stays
smooth exactly when it agrees with a continuous coorientation on both sides;
continuous labels flip across undirected edges and persist across directed
ones, so a passage creates an inflection iff

* the edge is undirected and both sides carry the same sign, or
* the edge is directed and the signs differ.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import DegenerateLeafCount, PathReversing
from .tree import CurveTraversal, NcpdTree, coorientation, traversal

DEFAULT_BUDGET = 26


def default_budget() -> int:
    return int(os.environ.get("TLC_BUDGET", DEFAULT_BUDGET))


@dataclass(frozen=True)
class LocalCoorientation:
    sigma: tuple[int, ...]

    def __post_init__(self):
        sigma = tuple(int(s) for s in self.sigma)
        if any(s not in (1, -1) for s in sigma):
            raise ValueError("local coorientation entries must be +1 or -1")
        object.__setattr__(self, "sigma", sigma)

    def __len__(self):
        return len(self.sigma)

    def __getitem__(self, i):
        return self.sigma[i]


def _sigma(t: NcpdTree, cc) -> tuple[int, ...]:
    sigma = cc.sigma if isinstance(cc, LocalCoorientation) else tuple(cc)
    expected = max(1, 2 * (t.n - 1))
    if len(sigma) != expected:
        raise ValueError(f"need {expected} side signs, got {len(sigma)}")
    return sigma


def is_nonflattening(t: NcpdTree) -> bool:
    """Some continuous coorientation puts every 1- and 2-gon outward and no
    inward k-gon contains more than k-3 neighbours."""
    labels = coorientation(t).label
    for sign in (1, -1):
        ok = True
        for v in range(t.n):
            k = t.base.degree(v)
            lab = sign * labels[v]
            if k <= 2 and lab < 0:
                ok = False
                break
            if lab < 0 and t.leaving[v] > k - 3:
                ok = False
                break
        if ok:
            return True
    return False


def is_admissible(t: NcpdTree, cc) -> bool:
    sigma = _sigma(t, cc)
    trav = traversal(t)
    outward = [0] * t.n
    for (v, _), s in zip(trav.sides, sigma):
        if s == 1:
            outward[v] += 1
    for v in range(t.n):
        k = t.base.degree(v)
        if k == 1 and outward[v] == 0:
            return False
        if k == 2 and outward[v] == 0:
            return False
        if outward[v] == 0 and t.leaving[v] > k - 3:
            return False
    return True


def _creates_inflection(undirected: bool, a: int, b: int) -> bool:
    return (a == b) if undirected else (a != b)


def inflecting_passages(t: NcpdTree, cc) -> list[int]:
    sigma = _sigma(t, cc)
    trav = traversal(t)
    return [
        i for i, p in enumerate(trav.passages)
        if _creates_inflection(p.undirected, sigma[p.source], sigma[p.target])
    ]


def count_inflections(t: NcpdTree, cc) -> int:
    return len(inflecting_passages(t, cc))


# --- connecting paths and joints -------------------------------------------

@dataclass(frozen=True)
class ConnectingPath:
    """Traversal segment from one 1-gon side to the next, both ends included."""

    sides: tuple[int, ...]
    reversing: bool

    @property
    def start(self) -> int:
        return self.sides[0]

    @property
    def end(self) -> int:
        return self.sides[-1]


def _leaf_sides(t: NcpdTree, trav: CurveTraversal) -> list[int]:
    return [i for i, (v, _) in enumerate(trav.sides) if t.base.degree(v) == 1]


def connecting_paths(t: NcpdTree) -> list[ConnectingPath]:
    trav = traversal(t)
    leaf_sides = _leaf_sides(t, trav)
    if len(leaf_sides) < 2:
        raise DegenerateLeafCount("connecting paths need at least two 1-gons")
    labels = coorientation(t).label
    m = len(trav.sides)
    paths = []
    for a, start in enumerate(leaf_sides):
        end = leaf_sides[(a + 1) % len(leaf_sides)]
        length = (end - start) % m or m
        sides = tuple((start + s) % m for s in range(length + 1))
        rev = labels[trav.sides[start][0]] != labels[trav.sides[end][0]]
        paths.append(ConnectingPath(sides, rev))
    return paths


def lower_bound_rev(t: NcpdTree) -> int:
    """Sign changes of continuous labels around the cyclic order of leaves."""
    if t.n == 1:
        return 0
    trav = traversal(t)
    labels = coorientation(t).label
    leaf_labels = [labels[trav.sides[i][0]] for i in _leaf_sides(t, trav)]
    return sum(1 for a, b in zip(leaf_labels, leaf_labels[1:] + leaf_labels[:1]) if a != b)


@dataclass(frozen=True)
class Joint:
    vertices: tuple[int, ...]
    threads: tuple[tuple[int, ...], tuple[int, ...]]
    thread_paths: tuple[int, int]


def _side_path(paths: Sequence[ConnectingPath], m: int) -> list[int]:
    owner = [-1] * m
    for a, path in enumerate(paths):
        for s in path.sides[1:-1]:
            owner[s] = a
    return owner


def joints(t: NcpdTree) -> list[Joint]:
    """Maximal chains of 2-gons glued along undirected edges, with their threads."""
    if t.n < 3:
        return []
    base = t.base
    two = {v for v in range(t.n) if base.degree(v) == 2}
    trav = traversal(t)
    m = len(trav.sides)
    owner = _side_path(connecting_paths(t), m)
    seen: set[int] = set()
    out = []
    for v0 in sorted(two):
        if v0 in seen:
            continue
        comp = {v0}
        todo = [v0]
        while todo:
            v = todo.pop()
            for w in base.rotation[v]:
                if w in two and w not in comp and t.state(v, w) is None:
                    comp.add(w)
                    todo.append(w)
        seen |= comp
        inside = [trav.sides[i][0] in comp for i in range(m)]
        # split the cyclic run structure into the two threads
        start = next(i for i in range(m) if inside[i] and not inside[i - 1])
        runs: list[list[int]] = []
        for s in range(m):
            i = (start + s) % m
            if inside[i]:
                if not runs or not inside[(i - 1) % m]:
                    runs.append([])
                runs[-1].append(i)
        if len(runs) != 2:
            raise RuntimeError(f"joint {sorted(comp)} has {len(runs)} threads")
        threads = (tuple(runs[0]), tuple(runs[1]))
        out.append(Joint(tuple(sorted(comp)), threads, (owner[runs[0][0]], owner[runs[1][0]])))
    return out


def standard_local_coorientation(t: NcpdTree, path: ConnectingPath) -> dict[int, int]:
    """Outward on the first 1-gon side, then smooth across every passage."""
    if path.reversing:
        raise PathReversing("standard coorientation is defined on nonreversing paths only")
    trav = traversal(t)
    signs = {path.sides[0]: 1}
    s = 1
    for a, b in zip(path.sides, path.sides[1:]):
        s = -s if trav.passages[a].undirected else s
        signs[b] = s
    if signs[path.sides[-1]] != 1:
        raise RuntimeError("nonreversing path ended on an inward 1-gon side")
    return signs


@dataclass(frozen=True)
class UpperBound:
    value: int
    rev: int
    jt: int
    bl: int
    suspicious_joints: tuple[Joint, ...] = ()
    suspicious_blocks: tuple[int, ...] = ()


def upper_bound(t: NcpdTree) -> UpperBound:
    """rev + 2 (suspicious joints + suspicious blocks).

    Blocks are judged literally: at least ``max(k-3, 0)`` leaving edges, and
    every side on a nonreversing path inward under the standard coorientation
    (vacuous when there is no such side).
    """
    paths = connecting_paths(t)
    trav = traversal(t)
    std: dict[int, int] = {}
    for path in paths:
        if not path.reversing:
            std.update(standard_local_coorientation(t, path))
    rev = lower_bound_rev(t)

    bad_joints = []
    for jt in joints(t):
        flags = [paths[a].reversing for a in jt.thread_paths]
        if all(flags):
            bad_joints.append(jt)
        elif not any(flags):
            for v in jt.vertices:
                mine = [s for s in jt.threads[0] + jt.threads[1] if trav.sides[s][0] == v]
                if all(std[s] == -1 for s in mine):
                    bad_joints.append(jt)
                    break
        else:
            thread = jt.threads[flags.index(False)]
            if any(std[s] == -1 for s in thread):
                bad_joints.append(jt)

    bad_blocks = []
    for v in range(t.n):
        k = t.base.degree(v)
        if t.leaving[v] < max(k - 3, 0):
            continue
        on_nonrev = [std[i] for i, (w, _) in enumerate(trav.sides) if w == v and i in std]
        if all(s == -1 for s in on_nonrev):
            bad_blocks.append(v)
    value = rev + 2 * (len(bad_joints) + len(bad_blocks))
    return UpperBound(value, rev, len(bad_joints), len(bad_blocks),
                      tuple(bad_joints), tuple(bad_blocks))


# --- exact minimum ----------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    lower: int
    exact: Optional[int]
    upper: int
    jt: int
    bl: int
    witness: Optional[LocalCoorientation] = field(default=None)

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "exact": self.exact,
            "upper": self.upper,
            "jt": self.jt,
            "bl": self.bl,
            "witness": None if self.witness is None else list(self.witness.sigma),
        }


def _search_arrays(t: NcpdTree):
    trav = traversal(t)
    m = len(trav.sides)
    blocks = np.array([v for v, _ in trav.sides], dtype=np.int32)
    undirected = np.array([p.undirected for p in trav.passages], dtype=np.int32)
    deg = np.array([t.base.degree(v) for v in range(t.n)], dtype=np.int32)
    leaving = np.array(t.leaving, dtype=np.int32)
    last_side = np.zeros(t.n, dtype=np.int32)
    for i, v in enumerate(blocks):
        last_side[v] = i
    forced = (deg[blocks] == 1).astype(np.int32)
    leaf_sides = np.flatnonzero(forced)
    next_leaf = np.full(m, m, dtype=np.int32)
    nxt = m
    for i in range(m - 1, -1, -1):
        next_leaf[i] = nxt
        if forced[i]:
            nxt = i
    prefix = np.ones(m + 1, dtype=np.int32)
    for j in range(m):
        prefix[j + 1] = prefix[j] * (-1 if undirected[j] else 1)
    tail_rev = np.zeros(m, dtype=np.int32)
    acc = 0
    for a in range(len(leaf_sides) - 1, -1, -1):
        L = leaf_sides[a]
        if a + 1 < len(leaf_sides):
            acc += int(prefix[L] * prefix[leaf_sides[a + 1]] != 1)
        tail_rev[L] = acc
    return (blocks, undirected, deg, leaving, last_side, forced,
            next_leaf, prefix, tail_rev, int(leaf_sides[-1]))


def exact_minimum(t: NcpdTree, backend=None) -> tuple[int, LocalCoorientation]:
    """Branch-and-bound minimum of created inflections over admissible coorientations.

    The returned witness is the lexicographically least optimum in traversal
    order with outward before inward.
    """
    if t.n == 1:
        return 0, LocalCoorientation((1,))
    kern = backend or kernels.active
    best, bits = kern.bnb_min_inflections(*_search_arrays(t))
    return int(best), LocalCoorientation(tuple(1 - 2 * int(b) for b in bits))


def min_inflections(t: NcpdTree, budget: Optional[int] = None) -> BoundReport:
    if budget is None:
        budget = default_budget()
    if t.n == 1:
        return BoundReport(0, 0, 0, 0, 0, LocalCoorientation((1,)))
    ub = upper_bound(t)
    lower = lower_bound_rev(t)
    if 2 * (t.n - 1) > budget:
        return BoundReport(lower, None, ub.value, ub.jt, ub.bl, None)
    exact, witness = exact_minimum(t)
    return BoundReport(lower, exact, ub.value, ub.jt, ub.bl, witness)
