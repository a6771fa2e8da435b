"""Sparse matrix-vector kernels and spectral-norm estimation.

Matrices are carried as canonical `scipy.sparse.csr_matrix` objects (sorted
column indices, no stored zeros, finite values) and vectors as 1-D float64
numpy arrays. Everything here is a pure function of its inputs.
"""

from typing import List, Optional, Union

import numpy as np
import scipy.sparse as sp
from numpy.typing import ArrayLike, NDArray

from src.config import settings
from src.exceptions import ConvergenceError, DimensionMismatchError

SparseMatrix = sp.csr_matrix
DenseVector = NDArray[np.float64]

SPECTRAL_START_KEY = 20170101


def as_csr(M: Union[sp.spmatrix, ArrayLike]) -> SparseMatrix:
    """Converts any matrix-like input to canonical CSR form.

    Duplicates are summed, explicit zeros dropped and column indices sorted
    within each row.

    Args:
        M: A scipy sparse matrix, numpy array or nested sequence.

    Returns:
        SparseMatrix: A float64 CSR matrix satisfying the canonical invariants.

    Raises:
        ValueError: If any stored value is NaN or infinite.
    """
    csr = sp.csr_matrix(M, dtype=np.float64, copy=True)
    csr.sum_duplicates()
    csr.eliminate_zeros()
    csr.sort_indices()
    if not np.all(np.isfinite(csr.data)):
        raise ValueError("sparse matrix contains non-finite values")
    return csr


def as_vector(v: ArrayLike) -> DenseVector:
    """Returns `v` as a contiguous 1-D float64 array (copying only when needed)."""
    return np.ascontiguousarray(v, dtype=np.float64).reshape(-1)


def matvec(M: SparseMatrix, v: DenseVector) -> DenseVector:
    """Computes M @ v.

    Raises:
        DimensionMismatchError: If `M.cols != len(v)`.
    """
    v = as_vector(v)
    if M.shape[1] != v.shape[0]:
        raise DimensionMismatchError("matvec: matrix columns vs vector length", M.shape[1], v.shape[0])
    return np.asarray(M @ v, dtype=np.float64)


def matvec_transpose(M: SparseMatrix, v: DenseVector) -> DenseVector:
    """Computes M^T @ v without materializing the transpose.

    Raises:
        DimensionMismatchError: If `M.rows != len(v)`.
    """
    v = as_vector(v)
    if M.shape[0] != v.shape[0]:
        raise DimensionMismatchError("matvec_transpose: matrix rows vs vector length", M.shape[0], v.shape[0])
    return np.asarray(M.T @ v, dtype=np.float64)


def _power_iteration(M: SparseMatrix, v: DenseVector, tol: float, max_iters: int) -> float:
    """Rayleigh quotient of M^T M after power iteration from the unit vector `v`."""
    older = previous = 0.0
    for _ in range(max_iters):
        w = matvec_transpose(M, matvec(M, v))
        quotient = float(v @ w)
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        v = w / norm
        if abs(quotient - previous) <= tol * abs(quotient):
            return quotient
        older, previous = previous, quotient
    raise ConvergenceError(
        f"power iteration did not converge within {max_iters} iterations",
        (older, previous),
    )


def _start_vectors(cols: int) -> List[DenseVector]:
    ones = np.full(cols, 1.0 / np.sqrt(cols))
    # The all-ones vector is an eigenvector of F^T F for every F = [G; I] with
    # zero row sums in G, so a fixed generic vector is always run as well.
    generic = np.random.Generator(np.random.Philox(SPECTRAL_START_KEY)).standard_normal(cols)
    return [ones, generic / np.linalg.norm(generic)]


def spectral_norm_sq(
    M: SparseMatrix,
    tol: Optional[float] = None,
    max_iters: Optional[int] = None,
) -> float:
    """Estimates ||M||_2^2 = lambda_max(M^T M) by power iteration on M^T M.

    Power iteration is run from the normalized all-ones vector and from a
    fixed pseudo-random unit vector, and the larger Rayleigh quotient is
    returned. A single start can sit exactly on a smaller eigenvector (or in
    the null space) and stop there, which the second start rules out. Both
    starts are fixed, so the estimate is deterministic. Each run stops when two
    consecutive quotients agree to relative tolerance `tol`.

    Args:
        M (SparseMatrix): A nonempty matrix.
        tol (float, optional): Relative stopping tolerance. Defaults to `settings.spectral_tol`.
        max_iters (int, optional): Iteration cap per start. Defaults to `settings.spectral_max_iters`.

    Returns:
        float: The estimate of the largest eigenvalue of M^T M.

    Raises:
        ValueError: If `M` is empty or `tol` is not positive.
        ConvergenceError: If the quotients have not settled after `max_iters` steps.
    """
    tol = settings.spectral_tol if tol is None else tol
    max_iters = settings.spectral_max_iters if max_iters is None else max_iters
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        raise ValueError("spectral_norm_sq requires a nonempty matrix")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if M.nnz == 0:
        return 0.0
    return max(_power_iteration(M, v, tol, max_iters) for v in _start_vectors(cols))
