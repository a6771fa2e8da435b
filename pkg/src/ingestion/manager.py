"""Ingestion Manager Implementation.

This module serves as the orchestrator for the Ingestion Layer.
It implements the `BaseIngestion` interface but delegates the actual heavy lifting
to specialized functional modules (`loader.py`, `cache.py` and `graph.py`).
"""

import hashlib
import os
from typing import Any, Optional

from src.config import LossKind
from src.ingestion.base import BaseIngestion
from src.ingestion.cache import MAGIC, dump_cache, load_cache
from src.ingestion.graph import build_feature_graph, graph_guided_problem
from src.ingestion.loader import load_libsvm
from src.problem.model import Dataset, Problem
from src.utils import setup_logger

logger = setup_logger(__name__)


def file_checksum(path: str) -> str:
    """Returns the SHA-256 hex digest of a file's bytes."""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


class IngestionManager(BaseIngestion):
    """
    Concrete implementation of the Ingestion Layer.

    This class ties together the loading, caching and graph-construction logic.
    It uses the Facade pattern to provide a simple API while managing the
    complexity of the underlying worker modules.
    """

    def load(self, source: str, **kwargs: Any) -> Dataset:
        """
        Loads a dataset from disk, recognising binary caches by their magic bytes.

        Args:
            source (str): Path to a LIBSVM text file or an AVRA1 cache.
            **kwargs: `n_features` (explicit dimension) and `cache_path`
                      (write an AVRA1 cache after parsing text).

        Returns:
            Dataset: The loaded samples.
        """
        logger.info(f"Manager loading dataset from source: {source}")
        if not os.path.exists(source):
            raise FileNotFoundError(f"Dataset not found: {source}")

        with open(source, "rb") as f:
            head = f.read(len(MAGIC))
        if head == MAGIC:
            return load_cache(source)

        dataset = load_libsvm(source, n_features=kwargs.get("n_features"))
        cache_path = kwargs.get("cache_path")
        if cache_path:
            dump_cache(dataset, cache_path)
        return dataset

    def build_problem(
        self,
        dataset: Dataset,
        loss: LossKind,
        nu: float,
        threshold: Optional[float] = None,
    ) -> Problem:
        """
        Builds the graph-guided fused-lasso problem of a dataset.

        Delegates graph construction to `graph.build_feature_graph` and the
        assembly of F = [G; I], B = -I, c = 0 to `graph.graph_guided_problem`.
        """
        graph = build_feature_graph(dataset, threshold)
        return graph_guided_problem(dataset, loss, nu, graph)
