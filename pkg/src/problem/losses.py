"""Per-sample loss components f_i(x) = phi(w_i^T x, b_i).

Both supported losses are linear-model losses, so every quantity the solvers
need reduces to the scalar function phi and its derivative evaluated at the
margins z_i = w_i^T x. This keeps gradients sparse (phi'(z_i) * w_i) and lets
a full pass be two sparse matrix-vector products.
"""

from abc import ABC, abstractmethod

import numpy as np
from numpy.typing import NDArray
from scipy.special import expit

from src.config import LossKind


class BaseLoss(ABC):
    """
    Abstract interface for a convex, smooth linear-model loss.

    Implementations work elementwise on arrays of margins `z` and labels `b`.
    """

    kind: LossKind

    @abstractmethod
    def value(self, z: NDArray[np.float64], b: NDArray[np.float64]) -> NDArray[np.float64]:
        """Returns phi(z_i, b_i) for every sample."""

    @abstractmethod
    def derivative(self, z: NDArray[np.float64], b: NDArray[np.float64]) -> NDArray[np.float64]:
        """Returns d phi / d z at (z_i, b_i) for every sample."""

    @property
    @abstractmethod
    def curvature_bound(self) -> float:
        """Upper bound on d^2 phi / d z^2, so that L_i = curvature_bound * ||w_i||^2."""

    def validate_labels(self, labels: NDArray[np.float64]) -> None:
        """Raises ValueError when labels are outside the loss's domain."""


class SquaredLoss(BaseLoss):
    """phi(z, b) = (z - b)^2 / 2."""

    kind = LossKind.SQUARED

    def value(self, z, b):
        r = z - b
        return 0.5 * r * r

    def derivative(self, z, b):
        return z - b

    @property
    def curvature_bound(self) -> float:
        return 1.0


class LogisticLoss(BaseLoss):
    """phi(z, b) = log(1 + exp(-b z)) for labels b in {-1, +1}."""

    kind = LossKind.LOGISTIC

    def value(self, z, b):
        # logaddexp(0, -t) == log1p(exp(-t)) without overflow for large |t|
        return np.logaddexp(0.0, -b * z)

    def derivative(self, z, b):
        return -b * expit(-b * z)

    @property
    def curvature_bound(self) -> float:
        return 0.25

    def validate_labels(self, labels):
        bad = ~np.isin(labels, (-1.0, 1.0))
        if np.any(bad):
            first = int(np.flatnonzero(bad)[0])
            raise ValueError(
                f"logistic loss requires labels in {{-1, +1}}; sample {first} has label {labels[first]!r}"
            )


def get_loss(kind: LossKind) -> BaseLoss:
    """
    Factory returning the loss implementation for `kind`.

    Raises:
        ValueError: If `kind` is not a supported LossKind.
    """
    if kind == LossKind.SQUARED:
        return SquaredLoss()
    elif kind == LossKind.LOGISTIC:
        return LogisticLoss()
    else:
        raise ValueError(f"Unsupported loss kind: {kind}")
