from .kernels import (
    DenseVector,
    SparseMatrix,
    as_csr,
    as_vector,
    matvec,
    matvec_transpose,
    spectral_norm_sq,
)
from .factorization import SpdFactorization, factor_spd, solve_residual, solve_spd

__all__ = [
    "DenseVector",
    "SparseMatrix",
    "as_csr",
    "as_vector",
    "matvec",
    "matvec_transpose",
    "spectral_norm_sq",
    "SpdFactorization",
    "factor_spd",
    "solve_residual",
    "solve_spd",
]
