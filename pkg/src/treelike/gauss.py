"""Gauss codes, chord-diagram planarity and the dual plane tree.

A tree-like curve with ``k`` double points is recorded by a cyclic word in
which each of ``k`` labels occurs twice.  The curve is tree-like exactly when
no two chords of that word interleave; the faces of the disk cut by the
chords then form a plane tree whose rotation system is read off the circle.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

from .errors import BadMultiplicity, NotTreeLike, OddLength, ParseError

Corner = tuple[int, int]


def _first_occurrence_relabel(word: Sequence) -> tuple[int, ...]:
    names: dict = {}
    out = []
    for token in word:
        if token not in names:
            names[token] = len(names) + 1
        out.append(names[token])
    return tuple(out)


@dataclass(frozen=True, eq=False)
class GaussDiagram:
    """Double-occurrence word, labels ``1..k`` in order of first occurrence.

    Equality and hashing are up to cyclic rotation and relabeling.
    """

    word: tuple[int, ...]

    def __post_init__(self):
        word = tuple(self.word)
        if len(word) % 2:
            raise OddLength(f"Gauss word has odd length {len(word)}")
        for label, count in Counter(word).items():
            if count != 2:
                raise BadMultiplicity(f"label {label!r} occurs {count} times, expected 2")
        object.__setattr__(self, "word", _first_occurrence_relabel(word))

    @property
    def k(self) -> int:
        return len(self.word) // 2

    @property
    def labels(self) -> frozenset[int]:
        return frozenset(self.word)

    @cached_property
    def canonical(self) -> tuple[int, ...]:
        """Lexicographically least rotation after first-occurrence relabeling."""
        w = self.word
        if not w:
            return ()
        return min(_first_occurrence_relabel(w[i:] + w[:i]) for i in range(len(w)))

    def __eq__(self, other):
        if not isinstance(other, GaussDiagram):
            return NotImplemented
        return self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    def __str__(self):
        return " ".join(map(str, self.word))

    def to_json(self) -> dict:
        return {"k": self.k, "word": list(self.word)}


def parse_gauss_code(text: str) -> GaussDiagram:
    """Parse a whitespace-separated Gauss code.

    >>> parse_gauss_code("x y y x").word
    (1, 2, 2, 1)
    """
    tokens = text.split()
    if len(tokens) % 2:
        raise OddLength(f"Gauss code has {len(tokens)} tokens, expected an even count",
                        position=len(tokens))
    counts = Counter(tokens)
    for idx, tok in enumerate(tokens, start=1):
        if counts[tok] != 2:
            raise BadMultiplicity(f"label {tok!r} occurs {counts[tok]} times, expected 2",
                                  position=idx)
    return GaussDiagram(tuple(tokens))


def is_tree_like(gd: GaussDiagram) -> bool:
    """True iff no two chords interleave (stack matcher over the word)."""
    stack: list[int] = []
    seen: set[int] = set()
    for label in gd.word:
        if label in seen:
            if not stack or stack[-1] != label:
                return False
            stack.pop()
        else:
            seen.add(label)
            stack.append(label)
    return True


@dataclass(frozen=True, eq=False)
class PlaneTree:
    """Tree with a rotation system: ``rotation[v]`` lists v's neighbours cyclically.

    Corners are pairs ``(v, i)``: the angular sector at ``v`` entered from
    ``rotation[v][i-1]`` and left towards ``rotation[v][i]``.  A vertex of
    degree ``d`` has ``d`` corners; the isolated vertex has one corner ``(0, 0)``.
    """

    rotation: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rot = tuple(tuple(int(x) for x in r) for r in self.rotation)
        object.__setattr__(self, "rotation", rot)
        n = len(rot)
        if n == 0:
            raise ValueError("a plane tree needs at least one vertex")
        half_edges = 0
        for v, nbrs in enumerate(rot):
            if len(set(nbrs)) != len(nbrs):
                raise ValueError(f"vertex {v} lists a neighbour twice")
            for w in nbrs:
                if not 0 <= w < n or w == v:
                    raise ValueError(f"bad neighbour {w} at vertex {v}")
                if v not in rot[w]:
                    raise ValueError(f"edge {v}-{w} is not listed at both ends")
            half_edges += len(nbrs)
        if half_edges != 2 * (n - 1):
            raise ValueError(f"{half_edges // 2} edges on {n} vertices: not a tree")
        seen = {0}
        todo = [0]
        while todo:
            v = todo.pop()
            for w in rot[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        if len(seen) != n:
            raise ValueError("rotation system is disconnected")

    @property
    def n(self) -> int:
        return len(self.rotation)

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((v, w) for v, nbrs in enumerate(self.rotation) for w in nbrs if v < w))

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        idx = {}
        for i, (u, v) in enumerate(self.edges):
            idx[(u, v)] = idx[(v, u)] = i
        return idx

    @cached_property
    def _slot(self) -> tuple[dict[int, int], ...]:
        return tuple({w: i for i, w in enumerate(nbrs)} for nbrs in self.rotation)

    def slot(self, v: int, w: int) -> int:
        """Position of neighbour ``w`` in ``rotation[v]``."""
        return self._slot[v][w]

    @property
    def leaves(self) -> list[int]:
        return [v for v in range(self.n) if self.degree(v) == 1]

    def corners(self) -> Iterator[Corner]:
        for v in range(self.n):
            for i in range(max(1, self.degree(v))):
                yield (v, i)

    def walk(self, start: Corner = (0, 0)) -> list[Corner]:
        """Contour walk: the ``2(n-1)`` corners in the order the face boundary visits them."""
        if self.n == 1:
            return [(0, 0)]
        out = []
        v, i = start
        for _ in range(2 * (self.n - 1)):
            out.append((v, i))
            w = self.rotation[v][i]
            v, i = w, (self.slot(w, v) + 1) % self.degree(w)
        return out

    def departure(self, corner: Corner) -> int:
        """Neighbour reached when leaving ``corner`` along the contour."""
        v, i = corner
        return self.rotation[v][i]

    def encode(self, root: int = 0, start: int = 0, marker=None) -> str:
        """Nested-parenthesis encoding with ``root``'s children listed from slot ``start``.

        ``marker(parent, child)`` returns the string placed before each child.
        """
        rot = self.rotation
        parts: list[str] = []

        def visit(v: int, order) -> None:
            parts.append("(")
            for w in order:
                if marker is not None:
                    parts.append(marker(v, w))
                d = len(rot[w])
                j = self._slot[w][v]
                visit(w, [rot[w][(j + s) % d] for s in range(1, d)])
            parts.append(")")

        d = len(rot[root])
        visit(root, [rot[root][(start + s) % d] for s in range(d)])
        return "".join(parts)

    def mirror(self) -> PlaneTree:
        return PlaneTree(tuple(tuple(reversed(r)) for r in self.rotation))

    def to_json(self) -> dict:
        return {"n": self.n, "rotation": [list(r) for r in self.rotation]}

    @classmethod
    def from_json(cls, data: dict) -> PlaneTree:
        tree = cls(tuple(tuple(r) for r in data["rotation"]))
        if tree.n != data.get("n", tree.n):
            raise ValueError("'n' disagrees with rotation length")
        return tree

    @classmethod
    def from_parens(cls, text: str) -> PlaneTree:
        """Build from a marker-free nested encoding such as ``"(()())"``."""
        rotation: list[list[int]] = []
        stack: list[int] = []
        for col, ch in enumerate(text, start=1):
            if ch == "(":
                v = len(rotation)
                rotation.append([])
                if stack:
                    rotation[stack[-1]].append(v)
                    rotation[v].append(stack[-1])
                stack.append(v)
            elif ch == ")":
                if not stack:
                    raise ParseError("unbalanced ')'", position=col)
                stack.pop()
                if not stack and col != len(text):
                    raise ParseError("trailing input after the root", position=col + 1)
            elif not ch.isspace():
                raise ParseError(f"unexpected character {ch!r}", position=col)
        if stack or not rotation:
            raise ParseError("unbalanced '('", position=len(text))
        return cls(tuple(tuple(r) for r in rotation))


@dataclass(frozen=True)
class DualTree:
    """Result of :func:`gauss_to_plane_tree`.

    ``chord_edge[label]`` is the tree edge dual to chord ``label``;
    ``arc_face[i]`` is the vertex (disk face) containing the boundary arc
    that follows position ``i`` of the word.
    """

    tree: PlaneTree
    chord_edge: dict[int, tuple[int, int]] = field(default_factory=dict)
    arc_face: tuple[int, ...] = ()


def gauss_to_plane_tree(gd: GaussDiagram) -> DualTree:
    """Dual tree of a planar chord diagram; vertex 0 is the face holding the arc before position 0."""
    if not is_tree_like(gd):
        raise NotTreeLike(f"chords of {gd} interleave")
    rotation: list[list[int]] = [[]]
    parent = [-1]
    face_of_chord: dict[int, int] = {}
    chord_edge: dict[int, tuple[int, int]] = {}
    arc_face = []
    current = 0
    for label in gd.word:
        if label in face_of_chord:
            current = parent[face_of_chord[label]]
        else:
            f = len(rotation)
            rotation.append([current])
            rotation[current].append(f)
            parent.append(current)
            face_of_chord[label] = f
            chord_edge[label] = (current, f)
            current = f
        arc_face.append(current)
    tree = PlaneTree(tuple(tuple(r) for r in rotation))
    return DualTree(tree, chord_edge, tuple(arc_face))


def plane_tree_to_gauss(tr: PlaneTree, start: Corner = (0, 0)) -> GaussDiagram:
    """Record the edge crossed at each step of the contour walk."""
    if tr.n == 1:
        return GaussDiagram(())
    word = [tr.edge_index[(v, tr.departure((v, i)))] for v, i in tr.walk(start)]
    return GaussDiagram(tuple(word))
