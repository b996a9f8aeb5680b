"""Bit-packed dense linear algebra over GF(2).

Gaussian elimination, M4RI, MMPF and recursive PLS decomposition with a
density-driven hybrid, on matrices stored as rows of 64-bit words.
"""

from ._backend import available as available_backends, get as backend, use as use_backend
from .bitmat import BitMatrix, MatrixWindow, from_dense, from_rows, identity, random
from .gauss import PlsResult, gauss_pls, gauss_rref
from .m4ri import m4ri_rref
from .mmpf import mmpf_pls
from .mul import addmul, mul_m4rm, mul_naive, trsm_lower_left_unit, trsm_upper_left_unit
from .perm import Permutation
from .pls import (EliminationConfig, decompose, hybrid_rref, pls_recursive, rank,
                  rref, rref_from_pls)

__version__ = "0.1.0"

__all__ = [
    "BitMatrix", "EliminationConfig", "MatrixWindow", "Permutation", "PlsResult",
    "addmul", "available_backends", "backend", "decompose", "from_dense", "from_rows",
    "gauss_pls", "gauss_rref", "hybrid_rref", "identity", "m4ri_rref", "mmpf_pls",
    "mul_m4rm", "mul_naive", "pls_recursive", "random", "rank", "rref", "rref_from_pls",
    "trsm_lower_left_unit", "trsm_upper_left_unit", "use_backend",
]
