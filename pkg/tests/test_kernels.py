"""Compiled and pure-Python kernels must agree exactly."""

import numpy as np
import pytest

from treelike import NcpdTree, enumerate_ncpd, enumerate_plane_trees, exact_minimum, parse_ncpd
from treelike import kernels
from treelike.census import burnside_terms, count_fixed
from treelike.tree import planar_automorphisms

pytestmark = pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")

BACKENDS = (kernels.python, kernels.compiled)


def test_active_is_compiled():
    assert kernels.BACKEND == "cython"


def test_bnb_agrees():
    for n in range(2, 7):
        for base in enumerate_plane_trees(n):
            for d in enumerate_ncpd(base):
                t = NcpdTree(base, d)
                a, b = (exact_minimum(t, backend=k) for k in BACKENDS)
                assert a == b, t.to_text()


def test_bnb_larger_tree():
    t = parse_ncpd("(-(>()-())<(-()-(-()))-(-(>()))>()-())")
    a, b = (exact_minimum(t, backend=k) for k in BACKENDS)
    assert a == b


def test_count_fixed_agrees():
    for n in range(2, 10):
        for base in enumerate_plane_trees(n):
            sym = planar_automorphisms(base)
            for j in range(sym.order):
                a, b = (count_fixed(base, sym.power(j), sym, backend=k) for k in BACKENDS)
                assert a == b


def test_identity_term_on_star():
    base = parse_ncpd("(" + "-()" * 6 + ")").base
    # at most one leaf edge may point at the center
    assert burnside_terms(base)[0] == 2 ** 6 + 6 * 2 ** 5


@pytest.mark.parametrize("seed", range(4))
def test_segment_crossings_agree(seed):
    rng = np.random.default_rng(seed)
    xy = rng.random((200, 2))
    a, b = (k.segment_crossings(xy, 1e-9) for k in BACKENDS)
    ka = sorted(zip(a[0].tolist(), a[1].tolist()))
    kb = sorted(zip(b[0].tolist(), b[1].tolist()))
    assert ka == kb
    assert a[5] == b[5]
