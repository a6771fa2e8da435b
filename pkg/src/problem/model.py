"""The linearly-constrained ERM instance and its evaluations.

    min_{x, y}  (1/n) sum_i f_i(x) + nu * ||y||_1   subject to  A x + B y = c

`Problem` is immutable after construction. Every operation below is a pure
function of a Problem and explicit vectors, so problems can be shared freely
between threads and worker processes.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from src.config import LossKind
from src.exceptions import DimensionMismatchError
from src.linalg import (
    DenseVector,
    SparseMatrix,
    as_csr,
    as_vector,
    matvec,
    matvec_transpose,
    spectral_norm_sq,
)
from src.problem.losses import BaseLoss, get_loss


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix (n samples x d attributes) and labels."""
    features: SparseMatrix
    labels: DenseVector

    def __post_init__(self):
        n, d = self.features.shape
        if n < 1 or d < 1:
            raise ValueError(f"dataset must have n >= 1 and d >= 1, got n={n}, d={d}")
        if self.labels.shape != (n,):
            raise DimensionMismatchError("dataset labels vs feature rows", n, self.labels.shape[0])

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    @property
    def nnz(self) -> int:
        return int(self.features.nnz)


@dataclass(frozen=True, eq=False)
class Problem:
    """A constrained ERM instance with its smoothness constants.

    Use `Problem.build` rather than the raw constructor: it canonicalizes the
    matrices, validates dimensions and labels, and computes L_i, L_Q, L_f and
    ||A||_2^2 once.

    Attributes:
        dataset (Dataset): Samples (w_i, b_i).
        loss (LossKind): Which f_i family.
        A, B (SparseMatrix): Constraint matrices.
        c (DenseVector): Constraint offset.
        nu (float): l1 weight of g(y) = nu * ||y||_1.
        lipschitz (DenseVector): Per-sample constants L_i.
        l_q (float): max_i L_i.
        l_f (float): Smoothness constant of the averaged loss.
        a_norm_sq (float): Estimate of ||A||_2^2.
    """
    dataset: Dataset
    loss: LossKind
    A: SparseMatrix
    B: SparseMatrix
    c: DenseVector
    nu: float
    lipschitz: DenseVector
    l_q: float
    l_f: float
    a_norm_sq: float
    _loss_impl: BaseLoss = field(repr=False, compare=False, default=None)

    @classmethod
    def build(
        cls,
        dataset: Dataset,
        loss: LossKind,
        A,
        B,
        c,
        nu: float,
    ) -> "Problem":
        """Validates inputs and computes smoothness constants.

        Raises:
            DimensionMismatchError: If A, B, c and the dataset are not conformable.
            ValueError: If `nu` is negative, labels are invalid for the loss,
                or the averaged loss has zero curvature.
        """
        loss = LossKind(loss)
        impl = get_loss(loss)
        A = as_csr(A)
        B = as_csr(B)
        c = as_vector(c)
        if nu < 0:
            raise ValueError(f"nu must be nonnegative, got {nu}")
        if A.shape[1] != dataset.d:
            raise DimensionMismatchError("A columns vs feature dimension", dataset.d, A.shape[1])
        if B.shape[0] != A.shape[0]:
            raise DimensionMismatchError("B rows vs A rows", A.shape[0], B.shape[0])
        if c.shape[0] != A.shape[0]:
            raise DimensionMismatchError("c length vs A rows", A.shape[0], c.shape[0])
        impl.validate_labels(dataset.labels)

        lipschitz, l_q, l_f = compute_smoothness(dataset, impl)
        if l_f <= 0:
            raise ValueError("averaged loss has zero smoothness constant (all-zero features?)")
        a_norm_sq = spectral_norm_sq(A) if A.nnz else 0.0
        return cls(
            dataset=dataset,
            loss=loss,
            A=A,
            B=B,
            c=c,
            nu=float(nu),
            lipschitz=lipschitz,
            l_q=l_q,
            l_f=l_f,
            a_norm_sq=a_norm_sq,
            _loss_impl=impl,
        )

    @property
    def n(self) -> int:
        return self.dataset.n

    @property
    def d(self) -> int:
        return self.dataset.d

    @property
    def y_dim(self) -> int:
        return self.B.shape[1]

    @cached_property
    def b_is_negative_identity(self) -> bool:
        """True when B = -I, the case with a closed-form y-step."""
        rows, cols = self.B.shape
        if rows != cols:
            return False
        return (self.B + sp.identity(rows, format="csr")).count_nonzero() == 0

    @property
    def loss_impl(self) -> BaseLoss:
        return self._loss_impl if self._loss_impl is not None else get_loss(self.loss)

    def subset(self, indices: Sequence[int]) -> "Problem":
        """Returns the same constrained problem restricted to the chosen samples."""
        idx = np.asarray(indices, dtype=np.int64)
        sub = Dataset(features=as_csr(self.dataset.features[idx]), labels=self.dataset.labels[idx].copy())
        return Problem.build(sub, self.loss, self.A, self.B, self.c, self.nu)


@dataclass(frozen=True, eq=False)
class GapArguments:
    """Candidate w_bar = (x_bar, y_bar, lam_bar) and reference w = (x, y, lam)."""
    x_bar: DenseVector
    y_bar: DenseVector
    lam_bar: DenseVector
    x: DenseVector
    y: DenseVector
    lam: DenseVector


def compute_smoothness(dataset: Dataset, loss: BaseLoss) -> Tuple[DenseVector, float, float]:
    """Computes (L_i, L_Q, L_f) for a linear-model loss.

    L_i = k * ||w_i||^2 and L_f = k * lambda_max((1/n) sum_i w_i w_i^T), where k
    is the loss curvature bound (1 for squared, 1/4 for logistic). L_f is
    clamped to L_Q so that the power-iteration estimate never breaks L_Q >= L_f.
    """
    X = dataset.features
    row_norms_sq = np.asarray(X.multiply(X).sum(axis=1), dtype=np.float64).reshape(-1)
    lipschitz = loss.curvature_bound * row_norms_sq
    l_q = float(lipschitz.max())
    l_f = loss.curvature_bound * spectral_norm_sq(X * (1.0 / np.sqrt(dataset.n)))
    return lipschitz, l_q, min(l_f, l_q)


def lf_conventions(dataset: Dataset) -> Dict[str, float]:
    """L_f of the averaged loss under both curvature conventions.

    Published tables rarely say whether the logistic 1/4 factor is applied;
    reporting both lets the matching convention be identified from data.
    """
    base = spectral_norm_sq(dataset.features * (1.0 / np.sqrt(dataset.n)))
    return {"squared": base, "logistic": 0.25 * base}


def smoothness_constants(p: Problem) -> Tuple[DenseVector, float, float]:
    """Returns (L_i vector, L_Q, L_f) of the problem."""
    return p.lipschitz, p.l_q, p.l_f


def _check_x(p: Problem, x: DenseVector) -> DenseVector:
    x = as_vector(x)
    if x.shape[0] != p.d:
        raise DimensionMismatchError("x length vs feature dimension", p.d, x.shape[0])
    return x


def _check_y(p: Problem, y: DenseVector) -> DenseVector:
    y = as_vector(y)
    if y.shape[0] != p.y_dim:
        raise DimensionMismatchError("y length vs B columns", p.y_dim, y.shape[0])
    return y


def margins(p: Problem, x: DenseVector) -> DenseVector:
    """Returns z_i = w_i^T x for all samples."""
    return matvec(p.dataset.features, _check_x(p, x))


def loss_value(p: Problem, x: DenseVector) -> float:
    """Returns f(x) = (1/n) sum_i f_i(x)."""
    values = p.loss_impl.value(margins(p, x), p.dataset.labels)
    return float(values.sum() / p.n)


def component_gradient(p: Problem, i: int, x: DenseVector) -> DenseVector:
    """Returns grad f_i(x) as a dense vector.

    Raises:
        IndexError: If `i` is not a valid sample index.
    """
    if not 0 <= i < p.n:
        raise IndexError(f"sample index {i} out of range [0, {p.n})")
    x = _check_x(p, x)
    X = p.dataset.features
    start, stop = X.indptr[i], X.indptr[i + 1]
    cols = X.indices[start:stop]
    vals = X.data[start:stop]
    # same sparse row kernel as `margins`, so z_i agrees bitwise with the full pass
    z = matvec(X[i:i + 1], x)
    scale = p.loss_impl.derivative(z, p.dataset.labels[i:i + 1])[0]
    grad = np.zeros(p.d)
    grad[cols] = scale * vals
    return grad


def component_gradients(p: Problem, x: DenseVector) -> sp.csr_matrix:
    """Returns all n component gradients as the rows of a sparse matrix."""
    scales = p.loss_impl.derivative(margins(p, x), p.dataset.labels)
    return sp.csr_matrix(p.dataset.features.multiply(scales[:, None]))


def full_gradient(p: Problem, x: DenseVector) -> DenseVector:
    """Returns grad f(x) = (1/n) sum_i grad f_i(x), summed in sample order."""
    scales = p.loss_impl.derivative(margins(p, x), p.dataset.labels)
    return matvec_transpose(p.dataset.features, scales) / p.n


def residual(p: Problem, x: DenseVector, y: DenseVector) -> DenseVector:
    """Returns A x + B y - c."""
    return matvec(p.A, _check_x(p, x)) + matvec(p.B, _check_y(p, y)) - p.c


def objective(p: Problem, x: DenseVector, y: DenseVector) -> float:
    """Returns f(x) + nu * ||y||_1."""
    return loss_value(p, x) + p.nu * float(np.abs(_check_y(p, y)).sum())


def lasso_objective(p: Problem, x: DenseVector) -> float:
    """Returns f(x) + nu * ||A x||_1, the generalized-lasso form before splitting."""
    return loss_value(p, x) + p.nu * float(np.abs(matvec(p.A, _check_x(p, x))).sum())


def constraint_violation(p: Problem, x: DenseVector, y: DenseVector) -> float:
    """Returns ||A x + B y - c||_2."""
    return float(np.linalg.norm(residual(p, x, y)))


def gap(p: Problem, args: GapArguments) -> float:
    """Evaluates the primal-dual gap function Q(w_bar; w).

    Q = [f(x) + g(y) + <lam_bar, A x + B y - c>] - [f(x_bar) + g(y_bar) + <lam, A x_bar + B y_bar - c>]
    """
    lam_bar = as_vector(args.lam_bar)
    lam = as_vector(args.lam)
    if lam.shape[0] != p.c.shape[0] or lam_bar.shape[0] != p.c.shape[0]:
        raise DimensionMismatchError("multiplier length vs constraint rows", p.c.shape[0], lam.shape[0])
    reference = objective(p, args.x, args.y) + float(lam_bar @ residual(p, args.x, args.y))
    candidate = objective(p, args.x_bar, args.y_bar) + float(lam @ residual(p, args.x_bar, args.y_bar))
    return reference - candidate
