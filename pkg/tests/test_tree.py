import itertools
import random

import pytest

from oracles import all_directions, all_plane_trees, block_labels, noncolliding_pairwise
from treelike import (
    CollidingDirections,
    NcpdTree,
    ParseError,
    PlaneTree,
    canonical_code,
    coorientation,
    parse_ncpd,
    planar_automorphisms,
    traversal,
    validate_noncolliding,
    whitney_index,
)
from treelike.tree import apply_automorphism, tree_center

PATH3 = PlaneTree(((1,), (0, 2), (1,)))
PATH4 = PlaneTree(((1,), (0, 2), (1, 3), (2,)))
STAR4 = PlaneTree(((1, 2, 3), (0,), (0,), (0,)))


def ncpd_trees(n_max):
    for n in range(1, n_max + 1):
        for rot in all_plane_trees(n):
            base = PlaneTree(rot)
            for d in all_directions(base.edges):
                if validate_noncolliding(base, d):
                    yield NcpdTree(base, d)


class TestNoncolliding:
    def test_head_on_pair(self):
        # a->b and c->b on the path a-b-c
        assert not validate_noncolliding(PATH3, (0, 2))

    def test_undirected_always_valid(self):
        assert validate_noncolliding(STAR4, (None, None, None))

    def test_star_all_outward(self):
        assert validate_noncolliding(STAR4, (0, 0, 0))
        assert noncolliding_pairwise(STAR4.rotation, STAR4.edges, (0, 0, 0))

    @pytest.mark.parametrize("n", range(2, 7))
    def test_agrees_with_pairwise_oracle(self, n):
        for rot in all_plane_trees(n):
            base = PlaneTree(rot)
            for d in all_directions(base.edges):
                assert validate_noncolliding(base, d) == noncolliding_pairwise(rot, base.edges, d)

    def test_constructor_rejects_collision(self):
        with pytest.raises(CollidingDirections):
            NcpdTree(PATH3, (0, 2))


class TestTextFormat:
    def test_markers(self):
        t = parse_ncpd("(>()-())")
        assert t.n == 3
        assert t.state(0, 1) == 0 and t.state(0, 2) is None
        assert parse_ncpd("(<())").state(0, 1) == 1

    def test_round_trip(self):
        for t in ncpd_trees(5):
            assert parse_ncpd(t.to_text()) == t

    def test_json_round_trip(self):
        t = parse_ncpd("(>(-()>())-())")
        assert NcpdTree.from_json(t.to_json()) == t

    @pytest.mark.parametrize("bad, col", [("(", 2), ("())", 3), ("(>)", 3), ("(())", 2),
                                          ("(>>())", 3), ("(x)", 2), ("", 1)])
    def test_parse_errors_carry_column(self, bad, col):
        with pytest.raises(ParseError) as exc:
            parse_ncpd(bad)
        assert exc.value.position == col

    def test_whitespace_ignored(self):
        assert parse_ncpd(" ( > ( ) ) ") == parse_ncpd("(>())")


class TestCoorientation:
    def test_undirected_path(self):
        t = NcpdTree(PATH3, (None, None))
        assert coorientation(t, 0, 1).label == (1, -1, 1)

    def test_directed_pair(self):
        t = parse_ncpd("(>())")
        assert coorientation(t, 0, 1).label == (1, 1)
        assert coorientation(t, 1, 1).label == (1, 1)

    def test_negation_and_oracle(self):
        for t in ncpd_trees(6):
            plus = coorientation(t, 0, 1)
            minus = coorientation(t, 0, -1)
            assert minus.label == tuple(-x for x in plus.label)
            assert list(plus.label) == block_labels(t.base.rotation, t.base.edges, t.direction)

    def test_root_choice_gives_same_pair(self):
        for t in ncpd_trees(5):
            pair = {coorientation(t).label, (-coorientation(t)).label}
            for r in range(t.n):
                assert coorientation(t, r, 1).label in pair


class TestWhitneyIndex:
    def test_examples(self):
        assert whitney_index(parse_ncpd("(-())")) == 0
        assert whitney_index(parse_ncpd("(>())")) == 2
        assert whitney_index(parse_ncpd("()")) == 1

    def test_parity(self):
        for t in ncpd_trees(6):
            assert whitney_index(t) % 2 == t.n % 2


class TestTraversal:
    def test_two_vertices(self):
        tr = traversal(parse_ncpd("(-())"))
        assert tr.blocks == (0, 1)
        assert [p.edge for p in tr.passages] == [0, 0]

    def test_path(self):
        tr = traversal(NcpdTree(PlaneTree(((1,), (0, 2), (1,))), (None, None)))
        assert tr.blocks == (0, 1, 2, 1)
        edges = PlaneTree(((1,), (0, 2), (1,))).edges
        assert [edges[p.edge] for p in tr.passages] == [(0, 1), (1, 2), (1, 2), (0, 1)]

    def test_star(self):
        tr = traversal(NcpdTree(STAR4, (None,) * 3))
        assert len(tr.sides) == 6 and tr.blocks.count(0) == 3

    def test_single_vertex(self):
        tr = traversal(parse_ncpd("()"))
        assert len(tr.sides) == 1 and tr.passages == ()

    def test_invariants(self):
        for t in ncpd_trees(6):
            if t.n == 1:
                continue
            tr = traversal(t)
            assert len(tr.sides) == 2 * (t.n - 1)
            for v in range(t.n):
                assert tr.blocks.count(v) == t.base.degree(v)
            used = sorted(p.edge for p in tr.passages)
            assert used == sorted(list(range(t.n - 1)) * 2)
            for p in tr.passages:
                a, b = tr.sides[p.source][0], tr.sides[p.target][0]
                assert t.base.edge_index[(a, b)] == p.edge


class TestCanonicalCode:
    def test_reencoding_invariance(self):
        for t in ncpd_trees(7):
            code = canonical_code(t)
            for r in range(t.n):
                for s in range(max(1, t.base.degree(r))):
                    assert canonical_code(parse_ncpd(t.to_text(r, s))) == code

    def test_two_encodings_of_directed_pair(self):
        assert canonical_code(parse_ncpd("(>())")) == canonical_code(parse_ncpd("(<())"))

    def test_direction_matters(self):
        a = parse_ncpd("(>(-()))")
        b = parse_ncpd("(<(-()))")
        assert canonical_code(a) != canonical_code(b)

    def test_reflection_flag(self):
        a = parse_ncpd("(>()-()-())")
        b = NcpdTree(a.base.mirror(), a.direction)
        assert canonical_code(a, reflect=True) == canonical_code(b, reflect=True)

    def test_chiral_pair_needs_reflection(self):
        a = parse_ncpd("(>()-()<(-()))")
        b = NcpdTree(a.base.mirror(), a.direction)
        assert canonical_code(a) != canonical_code(b)
        assert canonical_code(a, reflect=True) == canonical_code(b, reflect=True)


class TestAutomorphisms:
    def test_path3(self):
        sym = planar_automorphisms(PATH3)
        assert (sym.order, sym.center_kind, sym.center) == (2, "vertex", 1)

    def test_path4(self):
        sym = planar_automorphisms(PATH4)
        assert (sym.order, sym.center_kind, sym.center) == (2, "edge", (1, 2))

    def test_star4(self):
        sym = planar_automorphisms(STAR4)
        assert (sym.order, sym.center_kind, sym.center) == (3, "vertex", 0)

    def test_generator_properties(self):
        for n in range(1, 9):
            for rot in all_plane_trees(n):
                base = PlaneTree(rot)
                sym = planar_automorphisms(base)
                assert sym.power(sym.order) == tuple(range(n))
                if sym.order > 1:
                    assert len(base.leaves) % sym.order == 0
                    assert sym.power(1) != tuple(range(n))
                    # the generator preserves the rotation system
                    g = sym.generator
                    for v in range(n):
                        image = [g[w] for w in rot[v]]
                        target = list(rot[g[v]])
                        k = target.index(image[0])
                        assert image == target[k:] + target[:k]
                if sym.order > 2:
                    assert sym.center_kind == "vertex"

    def test_center_matches_peeling(self):
        for rot in all_plane_trees(7):
            base = PlaneTree(rot)
            sym = planar_automorphisms(base)
            c = tree_center(base)
            assert (sym.center if sym.center_kind == "edge" else (sym.center,)) == c

    def test_apply_automorphism_is_action(self):
        base = STAR4
        sym = planar_automorphisms(base)
        d = (0, None, 0)
        once = apply_automorphism(base, sym.generator, d)
        assert sorted(map(str, once)) == sorted(map(str, d))
        thrice = d
        for _ in range(3):
            thrice = apply_automorphism(base, sym.generator, thrice)
        assert thrice == d
