"""Explicit plane curves realizing ncpd-trees.

Every block is drawn star-shaped about a centre: its corners sit on a unit
circle and consecutive corners are joined by quadratic Bezier arcs, whose
curvature never changes sign.  One linear program chooses, for the whole
tree at once, the crossing angle of every edge, the angular gaps between
corners and the tilt of each arc at its ends, so that

* the arcs of a block bulge outward (``+`` blocks) or inward (``-`` blocks),
* the turn at each corner equals the crossing angle with the right sign,
* every Bezier control point stays inside its sector, keeping blocks simple.

Subtrees are built bottom-up in a local frame (attachment corner at the
origin, block centre at ``(1, 0)``) and then shrunk into the corner they hang
from.  Each placement is checked against the parent's sampled arcs inside the
angular sector the subtree occupies; the finished polyline is verified by
recomputing its crossings and its Gauss word.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence
from xml.sax.saxutils import escape

import numpy as np
from scipy.optimize import linprog

from . import kernels
from .errors import RealizationFailed, SizeLimit, TangentialCrossing
from .gauss import GaussDiagram, plane_tree_to_gauss
from .tree import NcpdTree, coorientation, traversal

MAX_N = 10
INTERSECTION_TOL = 1e-9
MIN_CROSSING_ANGLE = 1e-3
CURVATURE_FLAT = 1e-6
BETA_FLOOR = 0.15
MAX_RETRIES = 20


@dataclass(frozen=True)
class Crossing:
    """Self-intersection of the polyline between segments ``i < j``."""

    i: int
    j: int
    ti: float
    tj: float
    point: tuple[float, float]
    angle: float

    @property
    def params(self) -> tuple[float, float]:
        return (self.i + self.ti, self.j + self.tj)


@dataclass(frozen=True, eq=False)
class RealizedCurve:
    samples: np.ndarray
    segments: tuple[tuple[int, int, int], ...]
    crossings: tuple[Crossing, ...]
    tree: Optional[NcpdTree] = None
    side_of: Optional[np.ndarray] = None
    block_of: Optional[np.ndarray] = None
    centers: dict = field(default_factory=dict)
    convex: bool = False
    root: int = 0

    def block_polygon(self, v: int) -> np.ndarray:
        return self.samples[self.block_of == v]

    def side_samples(self, side: int) -> np.ndarray:
        return self.samples[self.side_of == side]


# --- layout program ------------------------------------------------------------

@dataclass
class _Corner:
    nbr: Optional[int]      # neighbouring block, None for a virtual corner
    edge: Optional[int]
    coef: int               # corner turn = coef * beta[edge]
    rho: float = 0.0


@dataclass
class _Block:
    v: int
    parent: Optional[int]
    sigma: int              # +1 arcs bulge out, -1 arcs bulge in (own frame)
    corners: list[_Corner]
    children: list[int]


def _choose_root(t: NcpdTree) -> int:
    """Vertex with every directed edge pointing away from it, of least height."""
    base = t.base
    best = None
    for r in range(t.n):
        parent = {r: -1}
        order = [r]
        ok = True
        depth = {r: 0}
        for v in order:
            for w in base.rotation[v]:
                if w in parent:
                    continue
                if t.state(v, w) == w:
                    ok = False
                parent[w] = v
                depth[w] = depth[v] + 1
                order.append(w)
        if ok:
            key = (max(depth.values()), r)
            best = key if best is None or key < best else best
    return best[1]


def _side_signs(t: NcpdTree, root: int, convex: bool) -> list[list[int]]:
    """Block side signs to try: all ``+1`` for the standard layout, else every
    sign choice meeting the nonflattening conditions."""
    if not convex:
        return [[1] * t.n]
    labels = coorientation(t, root=root).label
    out = []
    for s in (1, -1):
        ok = True
        for v in range(t.n):
            k = t.base.degree(v)
            outward = s * labels[v] > 0
            if not outward and (k <= 2 or t.leaving[v] > k - 3):
                ok = False
                break
        if ok:
            out.append([s * labels[v] for v in range(t.n)])
    return out


def _blocks(t: NcpdTree, root: int, sigma: list[int]) -> dict[int, _Block]:
    base = t.base
    blocks = {}
    todo = [(root, None)]
    while todo:
        v, p = todo.pop()
        rot = base.rotation[v]
        d = len(rot)
        if p is None:
            order = list(rot)
            real = []
        else:
            j = base.slot(v, p)
            order = [rot[(j + s) % d] for s in range(1, d)]
            real = [_Corner(p, base.edge_index[(v, p)], 1)]
        for w in order:
            directed = t.state(v, w) == v
            real.append(_Corner(w, base.edge_index[(v, w)], -1 if directed else 1))
            todo.append((w, v))
        corners = real
        if sigma[v] > 0:
            # smooth corners need neighbouring gaps below pi, so use at least six corners
            per_gap = 6 if d == 0 else max(1, -(-6 // d) - 1)
            corners = []
            for c in real or [None]:
                if c is not None:
                    corners.append(c)
                corners.extend(_Corner(None, None, 0) for _ in range(per_gap))
        blocks[v] = _Block(v, p, sigma[v], corners, order)
    return blocks


@dataclass
class _Layout:
    beta: np.ndarray
    delta: dict[int, np.ndarray]
    a: dict[int, np.ndarray]
    b: dict[int, np.ndarray]
    slack: float


def _solve_layout(t: NcpdTree, blocks: dict[int, _Block]) -> Optional[_Layout]:
    n_edges = t.n - 1
    offsets = {}
    nvar = 1 + n_edges
    for v, blk in blocks.items():
        offsets[v] = nvar
        nvar += 3 * len(blk.corners)
    W = nvar                # w <= min(beta, pi - beta) keeps crossings away from cusps
    nvar += 1
    A_eq, b_eq, A_ub, b_ub = [], [], [], []

    def row():
        return np.zeros(nvar)

    for v, blk in blocks.items():
        m = len(blk.corners)
        o = offsets[v]
        D, A, B = o, o + m, o + 2 * m
        r = row()
        r[D:D + m] = 1
        A_eq.append(r)
        b_eq.append(2 * math.pi)
        s = blk.sigma
        for i, c in enumerate(blk.corners):
            prev = (i - 1) % m
            r = row()
            r[A + i] += 1
            r[B + prev] += 1
            r[D + i] -= 0.5
            r[D + prev] -= 0.5
            if c.coef:
                r[1 + c.edge] += c.coef
            A_eq.append(r)
            b_eq.append(0.0)
            # Delta_i >= t
            r = row()
            r[0], r[D + i] = 1, -1
            A_ub.append(r)
            b_ub.append(0.0)
            for X in (A, B):
                # sigma * x >= t
                r = row()
                r[0], r[X + i] = 1, -s
                A_ub.append(r)
                b_ub.append(0.0)
                # sigma * x + Delta_i / 2 <= pi/2 - t
                r = row()
                r[0], r[X + i], r[D + i] = 1, s, 0.5
                A_ub.append(r)
                b_ub.append(math.pi / 2)
    for e in range(n_edges):
        r = row()
        r[0], r[1 + e] = 1, 1
        A_ub.append(r)
        b_ub.append(math.pi)
        r = row()
        r[W], r[1 + e] = 1, -1
        A_ub.append(r)
        b_ub.append(0.0)
        r = row()
        r[W], r[1 + e] = 1, 1
        A_ub.append(r)
        b_ub.append(math.pi)
    bounds = [(0.0, 0.35)] + [(BETA_FLOOR, math.pi - BETA_FLOOR)] * n_edges
    bounds += [(-math.pi, math.pi)] * (nvar - 2 - n_edges) + [(0.0, math.pi / 2)]
    A_ub = np.array(A_ub)
    A_eq = np.array(A_eq)
    cost = np.zeros(nvar)
    cost[0] = -1.0
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds,
                  method="highs")
    if res.status != 0 or res.x[0] < 1e-6:
        return None
    # second pass: keep most of the slack, widen the narrowest crossing
    bounds[0] = (0.7 * res.x[0], 0.35)
    cost[0], cost[W] = -0.1, -1.0
    res2 = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds,
                   method="highs")
    if res2.status == 0:
        res = res2
    x = res.x
    layout = _Layout(x[1:1 + n_edges].copy(), {}, {}, {}, float(x[0]))
    for v, blk in blocks.items():
        m, o = len(blk.corners), offsets[v]
        layout.delta[v] = x[o:o + m]
        layout.a[v] = x[o + m:o + 2 * m]
        layout.b[v] = x[o + 2 * m:o + 3 * m]
    return layout


# --- block geometry ---------------------------------------------------------------

def _unit(angle: float) -> np.ndarray:
    return np.array([math.cos(angle), math.sin(angle)])


@dataclass
class _Shape:
    center: np.ndarray
    Q: np.ndarray           # corner points, m x 2
    C: np.ndarray           # Bezier control points, side i runs Q[i] -> Q[i+1]
    start_dir: np.ndarray   # tangent angle leaving corner i
    end_dir: np.ndarray     # tangent angle arriving at corner i+1


def _shape(layout: _Layout, v: int, root: bool, theta0: float) -> _Shape:
    delta, a, b = layout.delta[v], layout.a[v], layout.b[v]
    m = len(delta)
    center = np.zeros(2) if root else np.array([1.0, 0.0])
    start = theta0 if root else math.pi
    theta = start + np.concatenate([[0.0], np.cumsum(delta)])
    Q = center + np.stack([np.cos(theta[:m]), np.sin(theta[:m])], axis=1)
    C = np.empty((m, 2))
    chord = (theta[:m] + theta[1:]) / 2 + math.pi / 2
    for i in range(m):
        q0, q1 = Q[i], Q[(i + 1) % m]
        L = float(np.hypot(*(q1 - q0)))
        reach = L * math.sin(b[i]) / math.sin(a[i] + b[i])
        C[i] = q0 + reach * _unit(chord[i] - a[i])
    return _Shape(center, Q, C, chord - a, chord + b)


def _bezier(q0, c, q1, u: np.ndarray) -> np.ndarray:
    u = u[:, None]
    return (1 - u) ** 2 * q0 + 2 * u * (1 - u) * c + u ** 2 * q1


def _params(n: int, refine_start: int, refine_end: int) -> np.ndarray:
    """Interior parameters: n uniform steps plus geometric refinement at the ends."""
    u = np.linspace(0.0, 1.0, n + 1)[1:-1]
    extra = [0.5 ** k / n for k in range(1, refine_start + 1)]
    extra += [1 - 0.5 ** k / n for k in range(1, refine_end + 1)]
    return np.unique(np.concatenate([u, extra]))


def _refinement(shape: _Shape, i: int, corner_end: int, target: float, n: int) -> int:
    """Halvings needed so the first sample lies within ``target`` of the corner."""
    m = len(shape.Q)
    q = shape.Q[i] if corner_end == 0 else shape.Q[(i + 1) % m]
    reach = 2 * float(np.hypot(*(shape.C[i] - q))) / n
    if target <= 0 or reach <= target:
        return 0
    return min(40, int(math.ceil(math.log2(reach / target))))


# --- assembly -------------------------------------------------------------------------

@dataclass
class _Piece:
    pts: np.ndarray
    side: np.ndarray
    block: np.ndarray
    centers: dict
    profile: Optional[np.ndarray] = None    # widest radius per angular bin, seen from the attachment corner
    F: float = 0.0          # farthest distance from the attachment corner


_BINS = 360
_SPREAD = 3             # bins of angular margin on each side


def _bin(ang: np.ndarray) -> np.ndarray:
    return np.clip(((ang + np.pi) * (_BINS / (2 * np.pi))).astype(int), 0, _BINS - 1)


def _profile(pts: np.ndarray) -> np.ndarray:
    """Widest radius per angular bin, dilated so nearby directions count too."""
    r = np.hypot(pts[:, 0], pts[:, 1])
    prof = np.zeros(_BINS)
    np.maximum.at(prof, _bin(np.arctan2(pts[:, 1], pts[:, 0])), r)
    out = prof.copy()
    for k in range(1, _SPREAD + 1):
        out = np.maximum(out, np.maximum(np.roll(prof, k), np.roll(prof, -k)))
    return out


def _rot(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def _wrap(x):
    return (x + np.pi) % (2 * np.pi) - np.pi


class _Builder:
    def __init__(self, t: NcpdTree, blocks, layout: _Layout, n_samples: int, shrink: float,
                 rng: np.random.Generator, root: int):
        self.t = t
        self.blocks = blocks
        self.layout = layout
        self.n = n_samples
        self.shrink = shrink
        self.rng = rng
        self.root = root
        trav = traversal(t)
        self.side_index = {corner: i for i, corner in enumerate(trav.sides)}

    def _side_id(self, v: int, from_nbr: Optional[int]) -> int:
        base = self.t.base
        if base.degree(v) == 0:
            return self.side_index[(0, 0)]
        slot = base.slot(v, from_nbr)
        return self.side_index[(v, (slot + 1) % base.degree(v))]

    def build(self, v: int) -> _Piece:
        blk = self.blocks[v]
        is_root = blk.parent is None
        theta0 = float(self.rng.uniform(0, 2 * math.pi)) if is_root else 0.0
        shape = _shape(self.layout, v, is_root, theta0)
        m = len(blk.corners)
        dense = [_bezier(shape.Q[i], shape.C[i], shape.Q[(i + 1) % m],
                         np.linspace(0, 1, 4 * self.n + 1)[1:-1]) for i in range(m)]
        dense_pts = np.concatenate(dense + [shape.Q])

        placed: dict[int, _Piece] = {}
        for i, c in enumerate(blk.corners):
            if c.nbr is None or c.nbr == blk.parent:
                continue
            child = self.build(c.nbr)
            placed[i] = self._place(blk, shape, i, child, dense_pts)

        # sample sides, refining towards corners that carry subtrees
        pts, side, block = [], [], []
        centers = {v: shape.center.copy()}
        for p in placed.values():
            centers.update(p.centers)
        # Bezier side i belongs to the traversal side leaving the last real corner at or before i
        real = [i for i, c in enumerate(blk.corners) if c.nbr is not None]
        follow = []
        for i in range(m):
            prior = [k for k in real if k <= i] or real[-1:]
            follow.append(self._side_id(v, blk.corners[prior[-1]].nbr if prior else None))

        for i in range(m):
            c0, c1 = blk.corners[i], blk.corners[(i + 1) % m]
            r0 = self._corner_target(blk, i, c0, shape)
            r1 = self._corner_target(blk, (i + 1) % m, c1, shape)
            u = _params(self.n, _refinement(shape, i, 0, r0, self.n),
                        _refinement(shape, i, 1, r1, self.n))
            seg = _bezier(shape.Q[i], shape.C[i], shape.Q[(i + 1) % m], u)
            if c0.nbr is None:
                seg = np.vstack([shape.Q[i], seg])
            pts.append(seg)
            side.append(np.full(len(seg), follow[i]))
            block.append(np.full(len(seg), v))
            j = (i + 1) % m
            if j in placed:
                p = placed[j]
                pts.append(p.pts[1:-1])
                side.append(p.side[1:-1])
                block.append(p.block[1:-1])
        P = np.concatenate(pts)
        S = np.concatenate(side)
        Bk = np.concatenate(block)
        if is_root:
            return _Piece(P, S, Bk, centers)
        # open path from the attachment corner back to it
        origin = np.zeros((1, 2))
        P = np.vstack([origin, P, origin])
        S = np.concatenate([[S[0]], S, [S[-1]]])
        Bk = np.concatenate([[v], Bk, [v]])
        inner = P[1:-1]
        return _Piece(P, S, Bk, centers, _profile(inner), float(np.hypot(*inner.T).max()))

    def _corner_target(self, blk: _Block, i: int, c: _Corner, shape: _Shape) -> float:
        if c.nbr is None:
            return 0.0
        if c.nbr == blk.parent:
            return 0.01
        return 0.05 * c.rho

    def _place(self, blk: _Block, shape: _Shape, j: int, child: _Piece,
               dense_pts: np.ndarray) -> _Piece:
        m = len(blk.corners)
        c = blk.corners[j]
        Qj = shape.Q[j]
        a_in = shape.end_dir[(j - 1) % m]
        a_out = shape.start_dir[j]
        cb = self.blocks[c.nbr]
        child_shape_u0 = self._child_dirs(cb)
        u0, u1 = child_shape_u0
        reflect = c.coef > 0
        pts = child.pts.copy()
        if reflect:
            pts[:, 1] *= -1
            u0, u1 = -u0, -u1
        phi = a_in - u0
        if abs(_wrap(u1 + phi - a_out)) > 1e-6:
            raise RealizationFailed("corner turn mismatch", self.t.to_text())
        # largest scale at which no parent sample enters the subtree's radial profile
        prof = child.profile[::-1] if reflect else child.profile
        d = dense_pts - Qj
        dist = np.hypot(d[:, 0], d[:, 1])
        keep = dist > 1e-12
        ang = _wrap(np.arctan2(d[keep, 1], d[keep, 0]) - phi)
        reach = prof[_bin(ang)]
        hit = reach > 0
        room = 0.8 * child.F * float((dist[keep][hit] / reach[hit]).min()) if hit.any() else math.inf
        others = [shape.Q[k] for k, ck in enumerate(blk.corners) if k != j and ck.nbr is not None]
        if others:
            room = min(room, 0.45 * min(float(np.hypot(*(Qj - q))) for q in others))
        room = min(room, 0.6) * self.shrink * float(self.rng.uniform(0.85, 1.0))
        c.rho = room
        eps = room / child.F
        R = _rot(phi) * eps

        def move(x):
            y = x.copy()
            if reflect:
                y[..., 1] *= -1
            return y @ R.T + Qj

        centers = {w: move(p) for w, p in child.centers.items()}
        out = pts @ R.T + Qj
        return _Piece(out, child.side, child.block, centers)

    def _child_dirs(self, cb: _Block) -> tuple[float, float]:
        shape = _shape(self.layout, cb.v, False, 0.0)
        m = len(cb.corners)
        return float(shape.start_dir[0]), float(shape.end_dir[m - 1])


# --- public API -------------------------------------------------------------------

def _normalize(P: np.ndarray):
    lo = P.min(axis=0)
    span = float((P.max(axis=0) - lo).max()) or 1.0
    return lambda x: (x - lo) / span


def realize(t: NcpdTree, convex: Optional[bool] = None, seed: int = 0,
            samples_per_side: int = 64, max_retries: int = MAX_RETRIES,
            check: bool = True) -> RealizedCurve:
    """Polyline realizing ``t``; ``convex=None`` turns on inflection-free layout when possible."""
    if t.n > MAX_N:
        raise SizeLimit(f"realization supports n <= {MAX_N}, got {t.n}")
    root = _choose_root(t)
    layout = None
    if convex is not False:
        for sigma in _side_signs(t, root, True):
            blocks = _blocks(t, root, sigma)
            layout = _solve_layout(t, blocks)
            if layout is not None:
                break
        if layout is None and convex:
            raise RealizationFailed("no inflection-free layout for this tree", t.to_text())
    is_convex = layout is not None
    if layout is None:
        blocks = _blocks(t, root, _side_signs(t, root, False)[0])
        layout = _solve_layout(t, blocks)
        if layout is None:
            raise RealizationFailed("no feasible angle layout", t.to_text())
    expected = plane_tree_to_gauss(t.base)
    shrink = 1.0
    last_error = "unverified"
    for _ in range(max_retries + 1):
        rng = np.random.default_rng(seed)
        n_samples = samples_per_side
        for _ in range(4):
            builder = _Builder(t, blocks, layout, n_samples, shrink, rng, root)
            piece = builder.build(root)
            if _turning_ok(piece.pts):
                break
            n_samples *= 2
        norm = _normalize(piece.pts)
        samples = norm(piece.pts)
        keep = _spaced(samples)
        samples, side_of, block_of = samples[keep], piece.side[keep], piece.block[keep]
        centers = {v: norm(p) for v, p in piece.centers.items()}
        segments = _segments(side_of)
        rc = RealizedCurve(samples, segments, (), t, side_of, block_of, centers,
                           is_convex, root)
        if not check:
            return rc
        try:
            crossings = find_crossings(rc)
        except TangentialCrossing as exc:
            last_error = str(exc)
            shrink /= 2
            continue
        rc = RealizedCurve(samples, segments, tuple(crossings), t, side_of, block_of,
                           centers, is_convex, root)
        if len(crossings) == t.n - 1 and _word(crossings) == expected and not nesting_violations(rc):
            return rc
        last_error = f"{len(crossings)} crossings, expected {t.n - 1}"
        shrink /= 2
    raise RealizationFailed(f"placement failed after {max_retries} retries ({last_error})",
                            t.to_text())


MIN_SPACING = 1e-7


def _spaced(P: np.ndarray) -> np.ndarray:
    """Mask dropping samples closer than ``MIN_SPACING`` to the last kept one."""
    keep = np.ones(len(P), dtype=bool)
    last = P[0]
    for k in range(1, len(P)):
        if abs(P[k, 0] - last[0]) + abs(P[k, 1] - last[1]) < MIN_SPACING:
            keep[k] = False
        else:
            last = P[k]
    return keep


def _segments(side: np.ndarray) -> tuple[tuple[int, int, int], ...]:
    out = []
    start = 0
    for k in range(1, len(side) + 1):
        if k == len(side) or side[k] != side[start]:
            out.append((start, k, int(side[start])))
            start = k
    return tuple(out)


def _turning_angles(P: np.ndarray) -> np.ndarray:
    d = np.roll(P, -1, axis=0) - P
    heading = np.arctan2(d[:, 1], d[:, 0])
    return _wrap(heading - np.roll(heading, 1))


def _turning_ok(P: np.ndarray) -> bool:
    total = _turning_angles(P).sum() / (2 * math.pi)
    return abs(total - round(total)) < 1e-3 / (2 * math.pi)


def turning_number(rc: RealizedCurve) -> int:
    """Total turning of the closed polyline divided by 2 pi."""
    return int(round(_turning_angles(rc.samples).sum() / (2 * math.pi)))


def find_crossings(rc: RealizedCurve) -> list[Crossing]:
    I, J, TI, TJ, S, parallel = kernels.segment_crossings(rc.samples, INTERSECTION_TOL)
    if parallel:
        raise TangentialCrossing(f"{parallel} overlapping segment pairs")
    out = []
    for i, j, ti, tj, s in zip(I, J, TI, TJ, S):
        angle = math.asin(min(1.0, float(s)))
        if angle < MIN_CROSSING_ANGLE:
            raise TangentialCrossing(f"crossing at segments {i}, {j} has angle {angle:.2e}")
        p = rc.samples[i] + float(ti) * (rc.samples[(i + 1) % len(rc.samples)] - rc.samples[i])
        out.append(Crossing(int(i), int(j), float(ti), float(tj), (float(p[0]), float(p[1])), angle))
    return out


def _word(crossings: Sequence[Crossing]) -> GaussDiagram:
    events = []
    for label, c in enumerate(crossings, start=1):
        events.append((c.i + c.ti, label))
        events.append((c.j + c.tj, label))
    events.sort()
    return GaussDiagram(tuple(label for _, label in events))


def verify_gauss(rc: RealizedCurve) -> GaussDiagram:
    """Gauss word read off the polyline's self-intersections."""
    return _word(find_crossings(rc))


def point_in_polygon(point, polygon: np.ndarray) -> bool:
    x, y = float(point[0]), float(point[1])
    px, py = polygon[:, 0], polygon[:, 1]
    qx, qy = np.roll(px, -1), np.roll(py, -1)
    straddle = (py > y) != (qy > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        cross_x = px + (y - py) * (qx - px) / (qy - py)
    return bool(np.count_nonzero(straddle & (x < cross_x)) % 2)


def nesting_violations(rc: RealizedCurve) -> list[tuple[int, int]]:
    """Tree edges whose realized blocks are nested the wrong way."""
    t = rc.tree
    bad = []
    for (u, v), src in zip(t.base.edges, t.direction):
        if src is None:
            ok = (not point_in_polygon(rc.centers[v], rc.block_polygon(u))
                  and not point_in_polygon(rc.centers[u], rc.block_polygon(v)))
        else:
            dst = v if src == u else u
            ok = point_in_polygon(rc.centers[dst], rc.block_polygon(src))
        if not ok:
            bad.append((u, v))
    return bad


def discrete_curvature(rc: RealizedCurve) -> np.ndarray:
    P = rc.samples
    turn = _turning_angles(P)
    seg = np.hypot(*(np.roll(P, -1, axis=0) - P).T)
    return turn / ((seg + np.roll(seg, 1)) / 2)


def numeric_inflections(rc: RealizedCurve) -> int:
    """Sign changes of discrete curvature around the closed polyline."""
    k = discrete_curvature(rc)
    signs = np.sign(k[np.abs(k) >= CURVATURE_FLAT])
    if len(signs) < 2:
        return 0
    return int(np.count_nonzero(signs != np.roll(signs, 1)))


# --- SVG ----------------------------------------------------------------------------

def to_svg(rc: RealizedCurve, width: int = 480, height: int = 480, margin: float = 0.05,
           stroke: str = "#222", stroke_width: float = 1.5, coorientation=None,
           inflections: Sequence[int] = (), marker_radius: float = 3.0) -> str:
    """SVG drawing; ``coorientation`` colours sides green (out) or red (in);
    ``inflections`` lists passage indices to mark."""
    scale = min(width, height) * (1 - 2 * margin)
    ox, oy = width * margin, height * margin

    def xy(p):
        return ox + p[0] * scale, oy + (1 - p[1]) * scale

    def path(points, close):
        coords = " L ".join(f"{x:.3f} {y:.3f}" for x, y in map(xy, points))
        return f"M {coords}" + (" Z" if close else "")

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
             f'viewBox="0 0 {width} {height}">']
    title = escape(rc.tree.to_text()) if rc.tree is not None else "curve"
    parts.append(f"<title>{title}</title>")
    parts.append(f'<path class="curve" d="{path(rc.samples, True)}" fill="none" '
                 f'stroke="{stroke}" stroke-width="{stroke_width}"/>')
    if coorientation is not None:
        sigma = list(getattr(coorientation, "sigma", coorientation))
        N = len(rc.samples)
        for start, stop, side in rc.segments:
            idx = [k % N for k in range(start, stop + 1)]
            colour = "#1a9641" if sigma[side] > 0 else "#d7191c"
            parts.append(f'<path class="side" data-side="{side}" d="{path(rc.samples[idx], False)}" '
                         f'fill="none" stroke="{colour}" stroke-width="{2 * stroke_width}"/>')
    for c in rc.crossings:
        x, y = xy(c.point)
        parts.append(f'<circle class="crossing" cx="{x:.3f}" cy="{y:.3f}" r="{marker_radius}" '
                     f'fill="none" stroke="#2b83ba"/>')
    if inflections:
        ends = {side: stop for start, stop, side in rc.segments}
        pts = np.array([c.point for c in rc.crossings]) if rc.crossings else None
        N = len(rc.samples)
        for passage in inflections:
            if passage not in ends:
                continue
            q = rc.samples[(ends[passage] - 1) % N]
            if pts is not None:
                q = pts[np.argmin(np.hypot(*(pts - q).T))]
            x, y = xy(q)
            parts.append(f'<circle class="inflection" cx="{x:.3f}" cy="{y:.3f}" '
                         f'r="{1.6 * marker_radius}" fill="#fdae61" stroke="none"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
