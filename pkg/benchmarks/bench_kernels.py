"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from treelike import NcpdTree, enumerate_ncpd, enumerate_plane_trees, exact_minimum, parse_ncpd
from treelike import kernels
from treelike.census import count_fixed
from treelike.tree import planar_automorphisms


def bnb_case(backend):
    trees = [NcpdTree(b, d) for b in enumerate_plane_trees(6) for d in enumerate_ncpd(b)]
    big = parse_ncpd("(-(-()-())-(-()-(-()))-(-(-()))-()-())")
    return lambda: ([exact_minimum(t, backend=backend) for t in trees],
                    exact_minimum(big, backend=backend))


def census_case(backend):
    bases = enumerate_plane_trees(9)

    def run():
        for base in bases:
            sym = planar_automorphisms(base)
            for j in range(sym.order):
                count_fixed(base, sym.power(j), sym, backend=backend)
    return run


def crossing_case(backend):
    rng = np.random.default_rng(0)
    t = np.linspace(0, 2 * np.pi, 2000, endpoint=False)
    xy = np.c_[np.cos(3 * t), np.sin(2 * t)] + 1e-4 * rng.standard_normal((len(t), 2))
    return lambda: backend.segment_crossings(xy, 1e-9)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.compiled is None:
        print("compiled kernels not built; only the Python timings are shown")
    cases = [("branch and bound, n <= 6 plus n = 12", bnb_case),
             ("fixed-map counts, all n = 9 trees", census_case),
             ("segment crossings, 2000-gon", crossing_case)]
    print(f"{'kernel':40s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, make in cases:
        py = min(timeit.repeat(make(kernels.python), number=1, repeat=args.repeat))
        if kernels.compiled is not None:
            cy = min(timeit.repeat(make(kernels.compiled), number=1, repeat=args.repeat))
            print(f"{name:40s} {py:10.4f} {cy:10.4f} {py / cy:7.1f}x")
        else:
            print(f"{name:40s} {py:10.4f} {'-':>10s}")


if __name__ == "__main__":
    main()
