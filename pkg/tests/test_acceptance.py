"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line with its wall time; the lines are
printed in the terminal summary (see ``conftest.py``).
"""

import itertools
import random
import time
from contextlib import contextmanager

import pytest

from oracles import brute_min_inflections, chords_interleave
from treelike import (
    NcpdTree,
    PlaneTree,
    count_total_ncpd,
    enumerate_ncpd,
    enumerate_plane_trees,
    exact_minimum,
    exact_symmetry_counts,
    is_admissible,
    is_nonflattening,
    is_tree_like,
    min_inflections,
    orbit_count,
    parse_gauss_code,
    parse_ncpd,
    plane_tree_to_gauss,
    realize,
    verify_gauss,
    whitney_index,
)
from treelike.census import discrepancies
from treelike.inflect import connecting_paths
from treelike.render import nesting_violations, turning_number
from treelike.tree import coorientation, traversal, validate_noncolliding

OUT, IN = 1, -1
RESULTS: list[str] = []


@contextmanager
def criterion(number, title, limit=None):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit is not None:
            assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        RESULTS.append(f"FAIL  {number}. {title} ({elapsed:.2f}s): {exc}")
        print(RESULTS[-1])
        raise
    RESULTS.append(f"PASS  {number}. {title} ({elapsed:.2f}s)")
    print(RESULTS[-1])


def path(n):
    return PlaneTree(tuple(tuple(w for w in (v - 1, v + 1) if 0 <= w < n) for v in range(n)))


def star(n):
    return PlaneTree((tuple(range(1, n)),) + tuple((0,) for _ in range(1, n)))


def ncpd_trees(n_max):
    for n in range(1, n_max + 1):
        for base in enumerate_plane_trees(n):
            for d in enumerate_ncpd(base):
                yield NcpdTree(base, d)


def double_occurrence_words(k):
    """Each word once up to relabeling (labels in order of first appearance)."""
    def rec(word, opened, counts):
        if len(word) == 2 * k:
            yield tuple(word)
            return
        for a in range(1, opened + 1):
            if counts[a] == 1:
                counts[a] = 2
                yield from rec(word + [a], opened, counts)
                counts[a] = 1
        if opened < k:
            counts[opened + 1] = 1
            yield from rec(word + [opened + 1], opened + 1, counts)
            del counts[opened + 1]
    yield from rec([], 0, {})


def test_planarity():
    with criterion(1, "planarity vs interleaving oracle, k <= 5", limit=1.0):
        assert not is_tree_like(parse_gauss_code("1 2 1 2"))
        assert is_tree_like(parse_gauss_code("1 2 2 1"))
        seen = 0
        for k in range(1, 6):
            for word in double_occurrence_words(k):
                gd = parse_gauss_code(" ".join(map(str, word)))
                assert is_tree_like(gd) == (not chords_interleave(word)), word
                seen += 1
        # (2k-1)!! words for k = 1..5
        assert seen == 1 + 3 + 15 + 105 + 945


def test_ncpd_count():
    with criterion(2, "noncolliding maps per plane tree, n = 2..8", limit=30.0):
        expected = {2: 3, 3: 8, 4: 20, 5: 48, 6: 112, 7: 256, 8: 576}
        for n, value in expected.items():
            assert count_total_ncpd(n) == value
            for base in enumerate_plane_trees(n):
                assert len(enumerate_ncpd(base)) == value, (n, base.rotation)


def test_orbit_counts():
    with criterion(3, "orbit counts and exact symmetry counts", limit=10.0):
        assert orbit_count(path(3)).orbit_count == 5
        assert orbit_count(path(4)).orbit_count == 11
        assert orbit_count(star(4)).orbit_count == 8
        row = orbit_count(star(7), document=True)
        assert row.orbit_count == 46 and row.agreement
        exact = exact_symmetry_counts(star(7))
        assert (exact[6], exact[3], exact[2]) == (2, 2, 6)
        notes = discrepancies([row])
        assert len(notes) == 1 and "literal" in notes[0]


def test_exact_minima():
    with criterion(4, "exact minima of the three small curves", limit=1.0):
        for text, value in [("(-())", 2), ("(>())", 0), ("(-(-()))", 2)]:
            t = parse_ncpd(text)
            assert exact_minimum(t)[0] == value
            best, _ = brute_min_inflections(t.base.rotation, t.base.edges, t.direction)
            assert best == value


def test_sandwich():
    with criterion(5, "lower <= exact <= upper, n <= 6", limit=120.0):
        count = 0
        for t in ncpd_trees(6):
            r = min_inflections(t)
            assert r.lower <= r.exact <= r.upper, t.to_text()
            count += 1
        # plane trees times noncolliding maps: 1 + 3 + 8 + 2*20 + 3*48 + 6*112
        assert count == 868


def test_criterion_equivalence():
    with criterion(6, "nonflattening iff exact minimum is zero, n <= 6"):
        for t in ncpd_trees(6):
            assert is_nonflattening(t) == (exact_minimum(t)[0] == 0), t.to_text()


def _random_tree(rng, n):
    parent = [None] + [rng.randrange(v) for v in range(1, n)]
    rot = [[] for _ in range(n)]
    for v in range(1, n):
        rot[parent[v]].append(v)
        rot[v].append(parent[v])
    for r in rot:
        rng.shuffle(r)
    base = PlaneTree(tuple(tuple(r) for r in rot))
    while True:
        d = tuple(rng.choice((None, u, v)) for u, v in base.edges)
        if validate_noncolliding(base, d):
            return NcpdTree(base, d)


def test_parity():
    with criterion(7, "segment parity between consecutive 1-gons, 10^4 samples"):
        rng = random.Random(20261016)
        checked = 0
        while checked < 10_000:
            t = _random_tree(rng, rng.randint(2, 8))
            trav = traversal(t)
            labels = coorientation(t).label
            paths = connecting_paths(t)
            for _ in range(40):
                sigma = tuple(rng.choice((OUT, IN)) for _ in trav.sides)
                if not is_admissible(t, sigma):
                    continue
                for p in paths:
                    created = 0
                    for s in p.sides[:-1]:
                        pas = trav.passages[s]
                        a, b = sigma[pas.source], sigma[pas.target]
                        created += (a == b) if pas.undirected else (a != b)
                    agree = labels[trav.sides[p.start][0]] == labels[trav.sides[p.end][0]]
                    assert (created % 2 == 0) == agree, (t.to_text(), sigma)
                checked += 1
                break


def test_whitney_index():
    with criterion(8, "Whitney index and realized turning, n <= 5"):
        assert whitney_index(parse_ncpd("(-())")) == 0
        assert whitney_index(parse_ncpd("(>())")) == 2
        assert whitney_index(parse_ncpd("()")) == 1
        for t in ncpd_trees(5):
            assert abs(turning_number(realize(t))) == whitney_index(t), t.to_text()


def test_render_round_trip():
    with criterion(9, "render round trip and nesting, n <= 6", limit=120.0):
        for t in ncpd_trees(6):
            rc = realize(t)
            assert verify_gauss(rc) == plane_tree_to_gauss(t.base), t.to_text()
            assert not nesting_violations(rc), t.to_text()
