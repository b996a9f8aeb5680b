"""Compiled kernels versus the numpy fallback on the same inputs.

    python3 benchmarks/bench_backends.py --sizes 256 512 1024 --reps 3

Prints one CSV row per (operation, size, backend) with the median time and
the speedup of the compiled backend.  Inputs are regenerated from a fixed
seed for every run so both backends see identical matrices.
"""

import argparse
import csv
import statistics
import sys
import time

import gf2pls
from gf2pls import EliminationConfig, random, rref
from gf2pls.mul import mul_m4rm


def _rref(algo):
    def run(n, seed):
        A = random(n, n, 0.5, seed)
        t0 = time.perf_counter()
        rref(A, EliminationConfig(algorithm=algo))
        return time.perf_counter() - t0
    return run


def _mul(n, seed):
    A, B = random(n, n, 0.5, seed), random(n, n, 0.5, seed + 1)
    t0 = time.perf_counter()
    mul_m4rm(A, B)
    return time.perf_counter() - t0


OPERATIONS = {
    "gauss_rref": _rref("gauss"),
    "m4ri_rref": _rref("m4ri"),
    "pls_rref": _rref("pls"),
    "mul_m4rm": _mul,
}


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[128, 256, 512])
    parser.add_argument("--reps", type=int, default=3)
    parser.add_argument("--ops", nargs="+", choices=sorted(OPERATIONS), default=list(OPERATIONS))
    args = parser.parse_args(argv)
    if "compiled" not in gf2pls.available_backends():
        print("compiled backend not built; nothing to compare", file=sys.stderr)
        return 1

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["operation", "n", "backend", "median_seconds", "speedup"])
    for op in args.ops:
        for n in args.sizes:
            medians = {}
            for backend in ("python", "compiled"):
                gf2pls.use_backend(backend)
                medians[backend] = statistics.median(
                    OPERATIONS[op](n, 1000 + rep) for rep in range(args.reps))
            gf2pls.use_backend("auto")
            for backend, t in medians.items():
                speed = medians["python"] / medians["compiled"] if backend == "compiled" else 1.0
                out.writerow([op, n, backend, f"{t:.6f}", f"{speed:.1f}"])
            sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
