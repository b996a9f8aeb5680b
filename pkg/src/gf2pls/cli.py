"""``gf2pls`` command line tool.

Exit codes: 0 success, 1 selftest or verification failure, 2 I/O or usage error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import time

from . import _backend
from .bitmat import random
from .io import (MatrixFormatError, read_matrix, read_permutation, write_matrix,
                 write_permutation)
from .mul import mul_naive
from .pls import ALGORITHMS, EliminationConfig, decompose, rank, rref
from .gauss import PlsResult
from .perm import to_matrix



class UsageError(Exception):
    pass


def _config(args) -> EliminationConfig:
    try:
        return EliminationConfig(k=args.k, cutoff_bytes=args.cutoff,
                                 hybrid_threshold=args.threshold, algorithm=args.algorithm)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _add_elim_flags(p: argparse.ArgumentParser, algorithms=ALGORITHMS, default="pls") -> None:
    p.add_argument("--algorithm", choices=algorithms, default=default)
    p.add_argument("--k", type=int, default=0, help="table bits, 0 = automatic")
    p.add_argument("--cutoff", type=int, default=None,
                   help="base-case window size in bytes (default: min(4 MiB, L2))")
    p.add_argument("--threshold", type=float, default=0.15,
                   help="hybrid switch density")


def cmd_gen(args) -> int:
    if args.rows < 0 or args.cols < 0 or not 0.0 <= args.density <= 1.0:
        raise UsageError("rows and cols must be non-negative and density in [0, 1]")
    A = random(args.rows, args.cols, args.density, args.seed)
    write_matrix(args.out, A, args.format)
    return 0


def cmd_rref(args) -> int:
    cfg = _config(args)
    A, fmt = read_matrix(args.input)
    r = rref(A, cfg)
    write_matrix(args.out, A, args.format or fmt)
    print(f"rank={r}")
    return 0


def cmd_rank(args) -> int:
    cfg = _config(args)
    A, _ = read_matrix(args.input)
    print(f"rank={rank(A, cfg)}")
    return 0


def cmd_pls(args) -> int:
    cfg = _config(args)
    A, fmt = read_matrix(args.input)
    res = decompose(A, cfg)
    write_matrix(args.out_packed, A, args.format or fmt)
    write_permutation(args.out_p, res.P)
    write_permutation(args.out_q, res.Q)
    print(f"rank={res.rank}")
    return 0


def cmd_verify(args) -> int:
    """Multiply a stored decomposition back and compare it with the input."""
    A, _ = read_matrix(args.input)
    packed, _ = read_matrix(args.packed)
    P, Q = read_permutation(args.p), read_permutation(args.q)
    if packed.shape != A.shape or len(P) != A.nrows or len(Q) != A.ncols:
        raise MatrixFormatError("decomposition files do not match the input dimensions")
    r = args.rank
    res = PlsResult(packed, r, P, Q)
    if not res.is_echelon():
        print("verify: pivot columns are not strictly increasing")
        return 1
    ok = mul_naive(to_matrix(P, A.nrows), mul_naive(res.L(), res.S())) == A
    print("verify: ok" if ok else "verify: P*L*S differs from the input")
    return 0 if ok else 1


def cmd_bench(args) -> int:
    if args.reps < 1:
        raise UsageError("--reps must be at least 1")
    cfg = _config(args)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["algorithm", "rows", "cols", "density", "rep", "seconds", "comment"])
    for rep in range(args.reps):
        A = random(args.rows, args.cols, args.density, args.seed + rep)
        t0 = time.perf_counter()
        r = rref(A, cfg)
        dt = max(time.perf_counter() - t0, 1e-9)
        out.writerow([args.algorithm, args.rows, args.cols, args.density, rep,
                      f"{dt:.6f}", f"rank={r}"])
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run

    print(f"backend: {_backend.get()}")
    return 0 if run(args.seed) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gf2pls", description="Dense linear algebra over GF(2).")
    parser.add_argument("--backend", choices=("auto", "compiled", "python"), default=None,
                        help="kernel implementation (default: GF2PLS_BACKEND or auto)")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random matrix")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("ascii", "bin"), default="ascii")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("rref", help="reduced row echelon form")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("ascii", "bin"), default=None,
                   help="output format (default: same as input)")
    _add_elim_flags(p)
    p.set_defaults(func=cmd_rref)

    p = sub.add_parser("rank", help="print the rank")
    p.add_argument("--in", dest="input", required=True)
    _add_elim_flags(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("pls", help="in-place PLS decomposition")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out-packed", required=True)
    p.add_argument("--out-p", required=True)
    p.add_argument("--out-q", required=True)
    p.add_argument("--format", choices=("ascii", "bin"), default=None)
    _add_elim_flags(p, algorithms=("gauss", "mmpf", "pls"))
    p.set_defaults(func=cmd_pls)

    p = sub.add_parser("verify", help="check a stored PLS decomposition against its input")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--packed", required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--rank", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time RREF on regenerated random matrices, CSV output")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=10)
    _add_elim_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("selftest", help="run the oracle suites")
    p.add_argument("--seed", type=int, default=2024)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        if args.backend:
            _backend.use(args.backend)
        return args.func(args)
    except (UsageError, MatrixFormatError) as exc:
        print(f"gf2pls: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"gf2pls: error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"gf2pls: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
