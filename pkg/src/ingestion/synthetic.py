"""Seeded synthetic datasets and desk-scale graph-guided problems.

All randomness flows from `numpy.random.default_rng(seed)`, so the same
arguments always produce the same bytes.
"""

from typing import Optional

import numpy as np

from src.config import LossKind
from src.ingestion.graph import FeatureGraph, chain_graph, graph_guided_problem
from src.linalg import as_csr
from src.problem.model import Dataset, Problem


def make_synthetic_dataset(
    n: int,
    d: int,
    loss: LossKind,
    seed: int = 0,
    feature_scale: float = 1.0,
    density: float = 1.0,
    noise: float = 0.1,
) -> Dataset:
    """
    Draws a linear-model dataset with a piecewise-constant ground truth.

    Features are i.i.d. standard normal times `feature_scale`, optionally
    sparsified to `density`. The ground truth is constant on blocks of
    consecutive attributes, which is the structure a chain fused lasso favours.
    Squared-loss labels are w_i^T x* + noise; logistic labels are the sign of
    that quantity (ties go to +1).

    Args:
        n (int): Number of samples.
        d (int): Number of attributes.
        loss (LossKind): Determines the label model.
        seed (int): Seed for the generator.
        feature_scale (float): Multiplies every feature; L_f grows with its square.
        density (float): Fraction of stored feature entries, in (0, 1].
        noise (float): Standard deviation of the label noise.

    Returns:
        Dataset: The drawn samples.
    """
    if not 0.0 < density <= 1.0:
        raise ValueError(f"density must lie in (0, 1], got {density}")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, d)) * feature_scale
    if density < 1.0:
        X *= rng.random((n, d)) < density
    blocks = max(1, d // 5)
    levels = rng.standard_normal(blocks)
    truth = np.repeat(levels, -(-d // blocks))[:d] / max(feature_scale, 1e-12)
    signal = X @ truth + noise * rng.standard_normal(n)
    if LossKind(loss) == LossKind.LOGISTIC:
        labels = np.where(signal >= 0.0, 1.0, -1.0)
    else:
        labels = signal
    return Dataset(features=as_csr(X), labels=labels)


def desk_problem(
    n: int = 100,
    d: int = 20,
    loss: LossKind = LossKind.SQUARED,
    nu: float = 0.01,
    seed: int = 0,
    feature_scale: float = 1.0,
    graph: Optional[FeatureGraph] = None,
) -> Problem:
    """A small graph-guided fused-lasso instance (chain graph unless given)."""
    dataset = make_synthetic_dataset(n, d, loss, seed=seed, feature_scale=feature_scale)
    return graph_guided_problem(dataset, loss, nu, graph if graph is not None else chain_graph(d))
