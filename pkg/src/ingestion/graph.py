"""Feature graphs and the graph-guided fused-lasso penalty F = [G; I].

The graph is built from the data alone: two attributes are joined when the
absolute Pearson correlation of their columns reaches a threshold. Each edge
(i, j) contributes a signed incidence row (+w at i, -w at j) to G, and the
identity block underneath keeps F at full column rank.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from src.config import LossKind, settings
from src.linalg import SparseMatrix, as_csr
from src.problem.model import Dataset, Problem
from src.utils import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True, eq=False)
class FeatureGraph:
    """Undirected attribute graph.

    Attributes:
        edges (np.ndarray): (e, 2) int array of pairs (i, j) with i < j, no duplicates.
        weights (np.ndarray): (e,) positive edge weights.
    """
    edges: np.ndarray
    weights: np.ndarray

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])


def correlation_matrix(dataset: Dataset) -> np.ndarray:
    """
    Pearson correlations between all pairs of feature columns.

    Computed from sparse second moments, so the data matrix is never densified.
    Constant columns get correlation 0 with everything (never NaN).
    """
    X = dataset.features
    n = dataset.n
    mean = np.asarray(X.mean(axis=0)).reshape(-1)
    second = np.asarray((X.T @ X).toarray()) / n
    cov = second - np.outer(mean, mean)
    var = np.diag(cov).copy()
    scale = np.maximum(np.diag(second), np.finfo(float).tiny)
    constant = var <= 1e-12 * scale
    std = np.sqrt(np.where(constant, 1.0, var))
    corr = cov / np.outer(std, std)
    corr[constant, :] = 0.0
    corr[:, constant] = 0.0
    return np.clip(corr, -1.0, 1.0)


def build_feature_graph(dataset: Dataset, threshold: Optional[float] = None) -> FeatureGraph:
    """
    Builds the correlation-threshold graph of a dataset.

    Args:
        dataset (Dataset): Source samples.
        threshold (float, optional): In (0, 1); edge (i, j) iff |corr| >= threshold.
            Defaults to `settings.default_graph_threshold`.

    Returns:
        FeatureGraph: Edges in lexicographic order, all weights 1.
    """
    threshold = settings.default_graph_threshold if threshold is None else threshold
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    corr = correlation_matrix(dataset)
    rows, cols = np.triu_indices(dataset.d, k=1)
    keep = np.abs(corr[rows, cols]) >= threshold
    edges = np.column_stack([rows[keep], cols[keep]]).astype(np.int64)
    logger.info(f"Feature graph: {edges.shape[0]} edges over {dataset.d} attributes (threshold={threshold}).")
    return FeatureGraph(edges=edges, weights=np.ones(edges.shape[0]))


def chain_graph(d: int) -> FeatureGraph:
    """Path graph 0-1-2-...-(d-1), the classic 1-D fused-lasso structure."""
    edges = np.column_stack([np.arange(d - 1), np.arange(1, d)]).astype(np.int64).reshape(-1, 2)
    return FeatureGraph(edges=edges, weights=np.ones(edges.shape[0]))


def build_penalty_matrix(graph: FeatureGraph, d: int) -> SparseMatrix:
    """
    Stacks the signed incidence rows of `graph` over the d x d identity.

    Raises:
        ValueError: If an edge index is outside [0, d).
    """
    e = graph.num_edges
    if e and (graph.edges.min() < 0 or graph.edges.max() >= d):
        raise ValueError(f"edge indices must lie in [0, {d})")
    edge_rows = np.repeat(np.arange(e), 2)
    edge_cols = graph.edges.reshape(-1)
    edge_vals = np.column_stack([graph.weights, -graph.weights]).reshape(-1)
    rows = np.concatenate([edge_rows, e + np.arange(d)])
    cols = np.concatenate([edge_cols, np.arange(d)])
    vals = np.concatenate([edge_vals, np.ones(d)])
    return as_csr(sp.coo_matrix((vals, (rows, cols)), shape=(e + d, d)))


def graph_guided_problem(
    dataset: Dataset,
    loss: LossKind,
    nu: float,
    graph: FeatureGraph,
) -> Problem:
    """
    Assembles min f(x) + nu ||y||_1 s.t. F x - y = 0 with F = [G; I].
    """
    F = build_penalty_matrix(graph, dataset.d)
    B = -sp.identity(F.shape[0], format="csr")
    return Problem.build(dataset, loss, F, B, np.zeros(F.shape[0]), nu)
