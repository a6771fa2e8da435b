"""Cached Cholesky factorization of lbar * I + beta1 * A^T A.

The exact (chi = 0) x-update solves (eta_s I + theta_s A^T A) x = rhs at every
inner step. With eta_s = lbar * alpha_2 and theta_s = beta1 * alpha_2 the
matrix is alpha_2 * (lbar I + beta1 A^T A), so one factorization built before
the first iteration serves every stage; callers divide by alpha_2 themselves.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import cho_solve
from scipy.linalg.lapack import dpotrf

from src.config import settings
from src.exceptions import DimensionMismatchError, FactorizationError, UnsupportedSizeError
from src.linalg.kernels import DenseVector, SparseMatrix, as_vector
from src.utils import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class SpdFactorization:
    """Upper Cholesky factor of lbar * I + beta1 * A^T A.

    Attributes:
        lbar (float): Diagonal shift.
        beta1 (float): Weight of the A^T A term.
        dim (int): Order of the factored matrix (number of columns of A).
        upper (np.ndarray): Upper-triangular factor U with U^T U = lbar I + beta1 A^T A.
        source (np.ndarray): The dense matrix that was factored, kept for residual checks.
    """
    lbar: float
    beta1: float
    dim: int
    upper: np.ndarray = field(repr=False)
    source: np.ndarray = field(repr=False)


def factor_spd(
    A: SparseMatrix,
    lbar: float,
    beta1: float,
    max_dim: Optional[int] = None,
) -> SpdFactorization:
    """Factors lbar * I + beta1 * A^T A for repeated solves.

    Args:
        A (SparseMatrix): Constraint matrix with d columns.
        lbar (float): Positive diagonal shift.
        beta1 (float): Nonnegative weight of A^T A.
        max_dim (int, optional): Largest d accepted. Defaults to `settings.dense_factor_max_dim`.

    Returns:
        SpdFactorization: The cached factor.

    Raises:
        ValueError: If `lbar <= 0` or `beta1 < 0`.
        UnsupportedSizeError: If d exceeds `max_dim`.
        FactorizationError: If LAPACK reports a non-positive pivot.
    """
    if lbar <= 0:
        raise ValueError(f"lbar must be positive, got {lbar}")
    if beta1 < 0:
        raise ValueError(f"beta1 must be nonnegative, got {beta1}")
    limit = settings.dense_factor_max_dim if max_dim is None else max_dim
    d = A.shape[1]
    if d > limit:
        raise UnsupportedSizeError(d, limit)

    gram = (A.T @ A).toarray() if A.nnz else np.zeros((d, d))
    source = beta1 * gram + lbar * np.eye(d)
    upper, info = dpotrf(source, lower=0, clean=1)
    if info > 0:
        # LAPACK reports the 1-based order of the failing leading minor
        raise FactorizationError(pivot=info - 1)
    if info < 0:
        raise ValueError(f"dpotrf rejected argument {-info}")
    logger.debug(f"Factored {d}x{d} SPD system (lbar={lbar:.6g}, beta1={beta1:.6g})")
    return SpdFactorization(lbar=lbar, beta1=beta1, dim=d, upper=upper, source=source)


def solve_spd(factor: SpdFactorization, b: DenseVector) -> DenseVector:
    """Solves (lbar I + beta1 A^T A) x = b with a cached factor.

    Raises:
        DimensionMismatchError: If `len(b)` differs from the factored order.
    """
    b = as_vector(b)
    if b.shape[0] != factor.dim:
        raise DimensionMismatchError("solve_spd: factor order vs right-hand side", factor.dim, b.shape[0])
    return cho_solve((factor.upper, False), b)


def solve_residual(factor: SpdFactorization, x: DenseVector, b: DenseVector) -> float:
    """Returns the relative residual ||(lbar I + beta1 A^T A) x - b|| / ||b||."""
    scale = float(np.linalg.norm(b))
    residual = float(np.linalg.norm(factor.source @ x - b))
    return residual / scale if scale > 0 else residual
