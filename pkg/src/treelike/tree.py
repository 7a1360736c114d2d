"""Noncolliding partially directed plane trees (ncpd-trees).

An ncpd-tree is a :class:`~treelike.gauss.PlaneTree` whose edges are either
undirected or directed from the containing block to the contained one.  It is
the complete invariant of a tree-like curve class.

Text format: nested parentheses, each child prefixed by the marker of the
edge to its parent: ``>`` parent contains child, ``<`` child contains parent,
``-`` neither.  ``"(>()-())"`` is a root that contains its first child and
sits beside its second.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Literal, Optional, Sequence

import numpy as np

from .errors import CollidingDirections, ParseError
from .gauss import Corner, PlaneTree

Direction = Optional[int]
"""Per-edge state: ``None`` (undirected) or the source vertex of a directed edge."""

MARKERS = ("-", ">", "<")


def validate_noncolliding(base: PlaneTree, direction: Sequence[Direction]) -> bool:
    """True iff some vertex sees every directed edge pointing away from it.

    Counts, for every candidate root, the directed edges pointing towards it;
    re-rooting across one edge changes that count by at most one.
    """
    if len(direction) != base.n - 1:
        raise ValueError(f"expected {base.n - 1} edge states, got {len(direction)}")
    edge_index = base.edge_index
    for (u, v), src in zip(base.edges, direction):
        if src is not None and src not in (u, v):
            raise ValueError(f"edge {u}-{v} cannot be directed from {src}")
    parent = [-1] * base.n
    order = [0]
    for v in order:
        for w in base.rotation[v]:
            if w != parent[v]:
                parent[w] = v
                order.append(w)
    towards_root = sum(
        1 for w in order[1:] if direction[edge_index[(w, parent[w])]] == w
    )
    bad = [0] * base.n
    bad[0] = towards_root
    for w in order[1:]:
        p = parent[w]
        src = direction[edge_index[(w, p)]]
        bad[w] = bad[p] + (1 if src == p else -1 if src == w else 0)
    return min(bad) == 0


@dataclass(frozen=True, eq=False)
class NcpdTree:
    base: PlaneTree
    direction: tuple[Direction, ...]

    def __post_init__(self):
        object.__setattr__(self, "direction", tuple(self.direction))
        if not validate_noncolliding(self.base, self.direction):
            raise CollidingDirections(f"colliding directions: {self.to_text()}")

    @property
    def n(self) -> int:
        return self.base.n

    def state(self, u: int, v: int) -> Direction:
        return self.direction[self.base.edge_index[(u, v)]]

    def marker(self, parent: int, child: int) -> str:
        src = self.state(parent, child)
        if src is None:
            return "-"
        return ">" if src == parent else "<"

    @cached_property
    def leaving(self) -> tuple[int, ...]:
        """Number of edges directed away from each vertex (blocks it contains)."""
        out = [0] * self.n
        for src in self.direction:
            if src is not None:
                out[src] += 1
        return tuple(out)

    def to_text(self, root: int = 0, start: int = 0) -> str:
        return self.base.encode(root, start, marker=self.marker)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"NcpdTree({self.to_text()!r})"

    def __eq__(self, other):
        if not isinstance(other, NcpdTree):
            return NotImplemented
        return self.base.rotation == other.base.rotation and self.direction == other.direction

    def __hash__(self):
        return hash((self.base.rotation, self.direction))

    def to_json(self) -> dict:
        def node(v: int, parent: int) -> dict:
            rot = self.base.rotation[v]
            d = len(rot)
            if parent < 0:
                kids = list(rot)
            else:
                j = self.base.slot(v, parent)
                kids = [rot[(j + s) % d] for s in range(1, d)]
            return {"children": [{"edge": self.marker(v, w), "node": node(w, v)} for w in kids]}

        return {"text": self.to_text(), "root": node(0, -1)}

    @classmethod
    def from_json(cls, data: dict) -> NcpdTree:
        def emit(node: dict) -> str:
            return "(" + "".join(c["edge"] + emit(c["node"]) for c in node["children"]) + ")"

        return parse_ncpd(emit(data["root"]))


def parse_ncpd(text: str) -> NcpdTree:
    """Parse the nested-parenthesis ncpd-tree format."""
    rotation: list[list[int]] = []
    edges: list[tuple[int, int, str]] = []
    stack: list[int] = []
    pending: Optional[str] = None
    finished = False
    for col, ch in enumerate(text, start=1):
        if ch.isspace():
            continue
        if finished:
            raise ParseError(f"trailing input {ch!r} after the root", position=col)
        if ch in MARKERS:
            if not stack:
                raise ParseError("edge marker outside any vertex", position=col)
            if pending is not None:
                raise ParseError("two edge markers in a row", position=col)
            pending = ch
        elif ch == "(":
            v = len(rotation)
            rotation.append([])
            if stack:
                if pending is None:
                    raise ParseError("child vertex without an edge marker", position=col)
                p = stack[-1]
                rotation[p].append(v)
                rotation[v].append(p)
                edges.append((p, v, pending))
                pending = None
            stack.append(v)
        elif ch == ")":
            if pending is not None:
                raise ParseError("edge marker not followed by a vertex", position=col)
            if not stack:
                raise ParseError("unbalanced ')'", position=col)
            stack.pop()
            finished = not stack
        else:
            raise ParseError(f"unexpected character {ch!r}", position=col)
    if not finished:
        raise ParseError("unbalanced '(' or empty input", position=len(text) + 1)
    base = PlaneTree(tuple(tuple(r) for r in rotation))
    direction: list[Direction] = [None] * (base.n - 1)
    for p, v, m in edges:
        direction[base.edge_index[(p, v)]] = None if m == "-" else (p if m == ">" else v)
    return NcpdTree(base, tuple(direction))


def undirected(base: PlaneTree) -> NcpdTree:
    return NcpdTree(base, (None,) * (base.n - 1))


@dataclass(frozen=True)
class CoorientationLabels:
    label: tuple[int, ...]
    root: int
    sign: int

    def __neg__(self) -> CoorientationLabels:
        return CoorientationLabels(tuple(-x for x in self.label), self.root, -self.sign)


def coorientation(t: NcpdTree, root: int = 0, sign: int = 1) -> CoorientationLabels:
    """Block labels of a continuous coorientation: flip across undirected edges only."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    label = [0] * t.n
    label[root] = sign
    todo = [root]
    while todo:
        v = todo.pop()
        for w in t.base.rotation[v]:
            if label[w] == 0:
                label[w] = -label[v] if t.state(v, w) is None else label[v]
                todo.append(w)
    return CoorientationLabels(tuple(label), root, sign)


def whitney_index(t: NcpdTree) -> int:
    """Absolute Whitney index: the absolute sum of block labels."""
    return abs(sum(coorientation(t).label))


@dataclass(frozen=True)
class Passage:
    """Crossing from ``sides[i]`` to ``sides[i+1]`` through ``edge``."""

    edge: int
    state: Direction
    source: int
    target: int

    @property
    def undirected(self) -> bool:
        return self.state is None


@dataclass(frozen=True)
class CurveTraversal:
    sides: tuple[Corner, ...]
    passages: tuple[Passage, ...]

    @property
    def blocks(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.sides)

    def __len__(self):
        return len(self.sides)


def traversal(t: NcpdTree, start: Corner = (0, 0)) -> CurveTraversal:
    """Sides in contour order; passage ``i`` leaves side ``i`` for side ``i+1``."""
    sides = tuple(t.base.walk(start))
    if t.n == 1:
        return CurveTraversal(sides, ())
    m = len(sides)
    passages = []
    for i, corner in enumerate(sides):
        eid = t.base.edge_index[(corner[0], t.base.departure(corner))]
        passages.append(Passage(eid, t.direction[eid], i, (i + 1) % m))
    return CurveTraversal(sides, tuple(passages))


def canonical_code(t: NcpdTree, reflect: bool = False) -> str:
    """Least text encoding over all roots and starting slots.

    Equal for two trees iff an orientation-preserving homeomorphism of the
    plane carries one onto the other; with ``reflect`` mirror images also
    compare equal.
    """
    candidates = [t]
    if reflect:
        candidates.append(NcpdTree(t.base.mirror(), t.direction))
    return min(
        c.to_text(v, i) for c in candidates for v, i in c.base.corners()
    )


def _contour_codes(base: PlaneTree) -> list[bytes]:
    # Encoding from the corner at walk position r: an edge opens where the
    # rotated walk first crosses it and closes at its second crossing.
    walk = base.walk()
    m = len(walk)
    edges = np.array([base.edge_index[(v, base.departure((v, i)))] for v, i in walk])
    partner = np.empty(m, dtype=np.int64)
    first: dict[int, int] = {}
    for pos, e in enumerate(edges):
        if e in first:
            partner[pos], partner[first[e]] = first[e], pos
        else:
            first[e] = pos
    r = np.arange(m)[:, None]
    idx = (np.arange(m)[None, :] + r) % m
    opens = (partner[idx] - r) % m > (idx - r) % m
    rows = np.where(opens, ord("("), ord(")")).astype(np.uint8)
    return [b"(" + row.tobytes() + b")" for row in rows]


def plane_tree_code(base: PlaneTree, reflect: bool = False) -> str:
    """Canonical marker-free code of the underlying plane tree."""
    if base.n == 1:
        return "()"
    trees = [base, base.mirror()] if reflect else [base]
    return min(code for b in trees for code in _contour_codes(b)).decode()


def canonical_plane_tree(base: PlaneTree) -> PlaneTree:
    return PlaneTree.from_parens(plane_tree_code(base))


# --- planar automorphisms ---------------------------------------------------

@dataclass(frozen=True)
class SymmetryInfo:
    order: int
    center_kind: Literal["vertex", "edge"]
    center: int | tuple[int, int]
    generator: tuple[int, ...]

    def power(self, j: int) -> tuple[int, ...]:
        perm = tuple(range(len(self.generator)))
        for _ in range(j % self.order):
            perm = tuple(self.generator[x] for x in perm)
        return perm


def tree_center(base: PlaneTree) -> tuple[int, ...]:
    """One or two central vertices, by repeatedly peeling leaves."""
    n = base.n
    if n <= 2:
        return tuple(range(n))
    deg = [base.degree(v) for v in range(n)]
    layer = [v for v in range(n) if deg[v] == 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in base.rotation[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return tuple(sorted(layer))


def _branch_code(base: PlaneTree, parent: int, child: int) -> str:
    rot = base.rotation
    parts = []

    def visit(v: int, p: int):
        parts.append("(")
        d = len(rot[v])
        j = base.slot(v, p)
        for s in range(1, d):
            visit(rot[v][(j + s) % d], v)
        parts.append(")")

    visit(child, parent)
    return "".join(parts)


def _corner_map(base: PlaneTree, a: Corner, b: Corner) -> tuple[int, ...]:
    perm = [-1] * base.n
    for (v, _), (w, _) in zip(base.walk(a), base.walk(b)):
        perm[v] = w
    return tuple(perm)


def planar_automorphisms(base: PlaneTree) -> SymmetryInfo:
    """Cyclic group of orientation-preserving symmetries, found at the tree center."""
    center = tree_center(base)
    identity = tuple(range(base.n))
    if len(center) == 1:
        c = center[0]
        codes = [_branch_code(base, c, w) for w in base.rotation[c]]
        d = len(codes)
        if d == 0:
            return SymmetryInfo(1, "vertex", c, identity)
        period = next(s for s in range(1, d + 1) if d % s == 0 and codes[s:] + codes[:s] == codes)
        p = d // period
        gen = identity if p == 1 else _corner_map(base, (c, 0), (c, period))
        return SymmetryInfo(p, "vertex", c, gen)
    u, v = center
    if _branch_code(base, v, u) == _branch_code(base, u, v):
        gen = _corner_map(base, (u, base.slot(u, v)), (v, base.slot(v, u)))
        return SymmetryInfo(2, "edge", (u, v), gen)
    return SymmetryInfo(1, "edge", (u, v), identity)


def apply_automorphism(t_base: PlaneTree, perm: Sequence[int],
                       direction: Sequence[Direction]) -> tuple[Direction, ...]:
    """Transport a direction map along a vertex permutation of ``t_base``."""
    out: list[Direction] = [None] * len(direction)
    idx = t_base.edge_index
    for (u, v), src in zip(t_base.edges, direction):
        out[idx[(perm[u], perm[v])]] = None if src is None else perm[src]
    return tuple(out)
