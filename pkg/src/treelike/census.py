"""Counting curve classes per Gauss diagram.

A Gauss diagram of a tree-like curve fixes the plane tree; the curve classes
are the noncolliding direction maps on it up to the tree's planar rotations.
Orbit counts come from Burnside averaging with fixed maps found by
enumeration, and are then compared with closed forms.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from . import kernels
from .errors import NotVertexCentered, SizeLimit
from .gauss import PlaneTree
from .tree import (
    Direction, NcpdTree, SymmetryInfo, apply_automorphism, canonical_code,
    planar_automorphisms, plane_tree_code, validate_noncolliding, whitney_index,
)

MAX_N = 12


# --- plane trees ------------------------------------------------------------

def _dyck_words(pairs: int):
    def grow(prefix: list[str], opened: int, closed: int):
        if closed == pairs:
            yield "".join(prefix)
            return
        if opened < pairs:
            prefix.append("(")
            yield from grow(prefix, opened + 1, closed)
            prefix.pop()
        if closed < opened:
            prefix.append(")")
            yield from grow(prefix, opened, closed + 1)
            prefix.pop()

    yield from grow([], 0, 0)


@lru_cache(maxsize=None)
def _plane_tree_codes(n: int) -> tuple[str, ...]:
    codes = set()
    for word in _dyck_words(n - 1):
        codes.add(plane_tree_code(PlaneTree.from_parens("(" + word + ")")))
    return tuple(sorted(codes))


def enumerate_plane_trees(n: int) -> list[PlaneTree]:
    """Plane trees on ``n`` vertices up to rotation-preserving equivalence, in canonical form."""
    if not 1 <= n <= MAX_N:
        raise SizeLimit(f"plane tree enumeration supports 1 <= n <= {MAX_N}, got {n}")
    return [PlaneTree.from_parens(code) for code in _plane_tree_codes(n)]


# --- direction maps -----------------------------------------------------------

def enumerate_ncpd(base: PlaneTree) -> list[tuple[Direction, ...]]:
    """Every noncolliding direction map on ``base``."""
    options = [(None, u, v) for u, v in base.edges]
    return [d for d in itertools.product(*options) if validate_noncolliding(base, d)]


def count_total_ncpd(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return 1
    return 2 ** (n - 1) + (n - 1) * 2 ** (n - 2)


def _rooted_at_center(base: PlaneTree, sym: SymmetryInfo):
    root = sym.center if sym.center_kind == "vertex" else sym.center[0]
    order = [root]
    parent = {root: -1}
    for v in order:
        for w in base.rotation[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
    return order, parent


def count_fixed(base: PlaneTree, perm: tuple[int, ...], sym: Optional[SymmetryInfo] = None,
                backend=None) -> int:
    """Noncolliding maps invariant under the planar rotation ``perm``.

    The tree is rooted at its center, so a rotation carries each edge's
    parent end to a parent end; only the central edge of an edge-centered
    tree can be flipped, which forces it undirected.
    """
    sym = sym or planar_automorphisms(base)
    kern = backend or kernels.active
    order, parent = _rooted_at_center(base, sym)
    pos = {v: i for i, v in enumerate(order)}
    n = base.n
    edge_of = {}
    for v in order[1:]:
        edge_of[v] = base.edge_index[(v, parent[v])]
    # union edges along the permutation; note which orbits contain a flip
    uf = list(range(n - 1))

    def find(x):
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    flipped = set()
    for v in order[1:]:
        img_child, img_parent = perm[v], perm[parent[v]]
        e, f = edge_of[v], base.edge_index[(img_child, img_parent)]
        uf[find(e)] = find(f)
        if parent.get(img_child) != img_parent:
            flipped.add(e)
    roots = sorted({find(e) for e in range(n - 1)})
    orbit_id = {r: i for i, r in enumerate(roots)}
    allowed = np.full(len(roots), 0b111, dtype=np.int32)
    for e in flipped:
        allowed[orbit_id[find(e)]] = 0b001
    par = np.full(n, -1, dtype=np.int32)
    orb = np.zeros(n, dtype=np.int32)
    for v in order[1:]:
        par[pos[v]] = pos[parent[v]]
        orb[pos[v]] = orbit_id[find(edge_of[v])]
    return int(kern.count_fixed_ncpd(par, orb, allowed))


def burnside_terms(base: PlaneTree, sym: Optional[SymmetryInfo] = None) -> list[int]:
    """Fixed-map counts for g^0, ..., g^(p-1)."""
    sym = sym or planar_automorphisms(base)
    by_gcd: dict[int, int] = {}
    terms = []
    for j in range(sym.order):
        g = math.gcd(j, sym.order)
        if g not in by_gcd:
            by_gcd[g] = count_fixed(base, sym.power(j), sym)
        terms.append(by_gcd[g])
    return terms


# --- Möbius bookkeeping for vertex-centered symmetry ------------------------

def divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def mobius(m: int) -> int:
    result = 1
    q = 2
    while q * q <= m:
        if m % q == 0:
            m //= q
            if m % q == 0:
                return 0
            result = -result
        q += 1
    return -result if m > 1 else result


def _vertex_centered(base: PlaneTree, sym: SymmetryInfo) -> int:
    if sym.center_kind != "vertex":
        raise NotVertexCentered(f"{plane_tree_code(base)} is centered on an edge")
    return (base.n - 1) // sym.order


def at_least_counts(base: PlaneTree) -> dict[int, int]:
    """Maps invariant under the subgroup of order d: 2^(kp/d) for d > 1, all maps for d = 1."""
    sym = planar_automorphisms(base)
    k = _vertex_centered(base, sym)
    p = sym.order
    return {d: count_total_ncpd(base.n) if d == 1 else 2 ** (k * p // d) for d in divisors(p)}


def lattice_exact_counts(base: PlaneTree) -> dict[int, int]:
    """Stabilizer exactly of order d, by inclusion-exclusion over subgroups containing it."""
    p = planar_automorphisms(base).order
    at_least = at_least_counts(base)
    return {
        d: sum(mobius(e // d) * at_least[e] for e in divisors(p) if e % d == 0)
        for d in divisors(p)
    }


def literal_exact_counts(base: PlaneTree) -> dict[int, int]:
    """Sum over d' | d of mu(d') 2^(kd/d') with d read as the stabilizer order (d > 1)."""
    sym = planar_automorphisms(base)
    k = _vertex_centered(base, sym)
    return {
        d: sum(mobius(e) * 2 ** (k * d // e) for e in divisors(d))
        for d in divisors(sym.order) if d > 1
    }


def stabilizer_order(base: PlaneTree, sym: SymmetryInfo, direction) -> int:
    direction = tuple(direction)
    return sum(
        1 for j in range(sym.order)
        if apply_automorphism(base, sym.power(j), direction) == direction
    )


def exact_symmetry_counts(base: PlaneTree) -> dict[int, int]:
    """Direction maps whose stabilizer has order exactly d, by direct classification."""
    sym = planar_automorphisms(base)
    _vertex_centered(base, sym)
    counts = {d: 0 for d in divisors(sym.order)}
    for direction in enumerate_ncpd(base):
        counts[stabilizer_order(base, sym, direction)] += 1
    return counts


# --- census rows ----------------------------------------------------------------

@dataclass(frozen=True)
class SymmetryReport:
    brute: dict[int, int]
    lattice: dict[int, int]
    literal: dict[int, int]

    @property
    def lattice_agrees(self) -> bool:
        return self.brute == self.lattice

    @property
    def literal_agrees(self) -> bool:
        return all(self.brute[d] == v for d, v in self.literal.items())

    def to_json(self) -> dict:
        keys = sorted(self.brute)
        return {
            "orders": keys,
            "brute": [self.brute[d] for d in keys],
            "lattice": [self.lattice[d] for d in keys],
            "literal": [self.literal.get(d) for d in keys],
            "lattice_agrees": self.lattice_agrees,
            "literal_agrees": self.literal_agrees,
        }


@dataclass(frozen=True)
class CensusRow:
    tree: str
    n: int
    p: int
    center_kind: str
    center: str
    total_ncpd: int
    orbit_count: int
    formula_value: Optional[int]
    agreement: bool
    symmetry: Optional[SymmetryReport] = field(default=None, compare=False)

    def to_json(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if k != "symmetry"}
        out["symmetry"] = None if self.symmetry is None else self.symmetry.to_json()
        return out


def formula_orbits(base: PlaneTree, sym: Optional[SymmetryInfo] = None) -> int:
    """Closed-form class count for the plane tree's symmetry type."""
    sym = sym or planar_automorphisms(base)
    n, p = base.n, sym.order
    total = count_total_ncpd(n)
    if p == 1:
        return total
    if sym.center_kind == "edge":
        k = n // 2
        value = (Fraction(2) ** (2 * k - 2) + (2 * k - 1) * Fraction(2) ** (2 * k - 3)
                 + Fraction(2) ** (k - 2))
        if value.denominator != 1:
            raise ArithmeticError(f"non-integral edge-centered count {value}")
        return int(value)
    k = (n - 1) // p
    if _is_prime(p):
        return 2 ** k + (total - 2 ** k) // p
    exact = lattice_exact_counts(base)
    value = sum(Fraction(count * d, p) for d, count in exact.items())
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral lattice count {value}")
    return int(value)


def _is_prime(m: int) -> bool:
    return m > 1 and all(m % q for q in range(2, math.isqrt(m) + 1))


def _center_text(sym: SymmetryInfo) -> str:
    if sym.center_kind == "vertex":
        return str(sym.center)
    return "-".join(map(str, sym.center))


def orbit_count(base: PlaneTree, document: bool = False) -> CensusRow:
    if base.n > MAX_N:
        raise SizeLimit(f"orbit counting supports n <= {MAX_N}, got {base.n}")
    sym = planar_automorphisms(base)
    terms = burnside_terms(base, sym)
    orbits, rem = divmod(sum(terms), sym.order)
    if rem:
        raise ArithmeticError("Burnside sum not divisible by the group order")
    formula = formula_orbits(base, sym)
    report = None
    if document and sym.order > 1 and sym.center_kind == "vertex":
        report = SymmetryReport(exact_symmetry_counts(base), lattice_exact_counts(base),
                                literal_exact_counts(base))
    return CensusRow(
        tree=plane_tree_code(base), n=base.n, p=sym.order, center_kind=sym.center_kind,
        center=_center_text(sym), total_ncpd=terms[0], orbit_count=orbits,
        formula_value=formula, agreement=orbits == formula, symmetry=report,
    )


def _row_for_code(args) -> CensusRow:
    code, document = args
    return orbit_count(PlaneTree.from_parens(code), document)


def census_table(n_max: int, n_min: int = 1, document: bool = False,
                 workers: Optional[int] = None) -> list[CensusRow]:
    """One row per canonical plane tree with ``n_min <= n <= n_max``, ordered by (n, code)."""
    if n_max > MAX_N:
        raise SizeLimit(f"census supports n <= {MAX_N}, got {n_max}")
    jobs = [(code, document) for n in range(max(1, n_min), n_max + 1)
            for code in _plane_tree_codes(n)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_row_for_code, jobs, chunksize=8))
    return [_row_for_code(job) for job in jobs]


def discrepancies(rows: list[CensusRow]) -> list[str]:
    """Human-readable lines for every disagreement found in ``rows``."""
    out = []
    for row in rows:
        if not row.agreement:
            out.append(f"{row.tree}: Burnside {row.orbit_count} != formula {row.formula_value}")
        sym = row.symmetry
        if sym is None:
            continue
        if not sym.lattice_agrees:
            out.append(f"{row.tree}: stabilizer counts {sym.brute} != lattice {sym.lattice}")
        if not sym.literal_agrees:
            diff = {d: (sym.brute[d], v) for d, v in sym.literal.items() if sym.brute[d] != v}
            out.append(f"{row.tree}: literal Mobius sum differs (order: brute, literal) {diff}")
    return out


CSV_COLUMNS = ("n", "tree_code", "p", "center", "total", "orbits", "formula", "agree")


def rows_to_csv(rows: list[CensusRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([r.n, r.tree, r.p, f"{r.center_kind}:{r.center}", r.total_ncpd,
                         r.orbit_count, r.formula_value, str(r.agreement).lower()])
    return buf.getvalue()


# --- classes and histograms ----------------------------------------------------------

def orbit_representatives(base: PlaneTree) -> list[NcpdTree]:
    """One ncpd-tree per class, the one whose text is the class's canonical code."""
    codes = {canonical_code(NcpdTree(base, d)) for d in enumerate_ncpd(base)}
    from .tree import parse_ncpd
    return [parse_ncpd(c) for c in sorted(codes)]


def index_histogram(base: PlaneTree) -> dict[int, int]:
    """Number of curve classes on ``base`` per absolute Whitney index."""
    sym = planar_automorphisms(base)
    weights: Counter = Counter()
    for direction in enumerate_ncpd(base):
        stab = stabilizer_order(base, sym, direction)
        weights[whitney_index(NcpdTree(base, direction))] += Fraction(stab, sym.order)
    return {idx: int(w) for idx, w in sorted(weights.items())}
