#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python twin.

Runs the MST and dimension-1 pairing kernels on perfect and perturbed grids
of increasing size and prints a timing table with the speedup. The compiled
column is skipped when the extension is not built.

Usage: python benchmarks/bench_backends.py [--quick]
"""

import argparse
import importlib.util
import sys
import time

import numpy as np

import latticeorder._pycore as pycore
from latticeorder.lattice import LatticeSpec, PerturbationSpec, gen_square, perturb
from latticeorder.persistence import _edge_arrays, enclosing_radius, pairwise_distances

HAVE_CORE = importlib.util.find_spec("latticeorder._core") is not None
if HAVE_CORE:
    import latticeorder._core as core


def cases(quick: bool):
    yield "perfect 10x10", gen_square(LatticeSpec("square", 10))
    yield "perturbed 10x10", perturb(gen_square(LatticeSpec("square", 10)),
                                     PerturbationSpec(0.02, 1))
    if quick:
        return
    yield "perfect 15x15", gen_square(LatticeSpec("square", 15))
    yield "perturbed 15x15", perturb(gen_square(LatticeSpec("square", 15)),
                                     PerturbationSpec(0.015, 2))
    yield "perfect 22x22", gen_square(LatticeSpec("square", 22))
    yield "perturbed 22x22", perturb(gen_square(LatticeSpec("square", 22)),
                                     PerturbationSpec(0.01, 3))


def time_kernel(kernels, dist, ei, ej, ew, threshold, n):
    start = time.perf_counter()
    deaths, n_comp = kernels.mst_deaths(ei, ej, ew, n)
    births, h1_deaths, zero = kernels.h1_pairs(dist, ei, ej, ew, threshold)
    elapsed = time.perf_counter() - start
    return elapsed, (len(deaths), n_comp, len(births), zero)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="small cases only")
    args = parser.parse_args()

    print(f"compiled extension available: {HAVE_CORE}")
    header = f"{'case':<18} {'points':>6} {'edges':>8} {'python':>9} {'compiled':>9} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, cloud in cases(args.quick):
        d = pairwise_distances(cloud)
        threshold = enclosing_radius(d)
        ei, ej, ew = _edge_arrays(d.full, threshold)
        py_t, py_out = time_kernel(pycore, d.full, ei, ej, ew, threshold, d.n)
        if HAVE_CORE:
            c_t, c_out = time_kernel(core, d.full, ei, ej, ew, threshold, d.n)
            if (not np.array_equal(py_out[0], c_out[0])) and py_out != c_out:
                print(f"!! backend outputs disagree on {name}", file=sys.stderr)
                return 1
            print(f"{name:<18} {d.n:>6} {len(ew):>8} {py_t:>8.3f}s {c_t:>8.3f}s {py_t / c_t:>7.1f}x")
        else:
            print(f"{name:<18} {d.n:>6} {len(ew):>8} {py_t:>8.3f}s {'-':>9} {'-':>8}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
