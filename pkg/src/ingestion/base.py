"""Abstract Interface for the Data Ingestion Layer.

This module defines the contract that any ingestion implementation must follow:
turn a data source into a `Dataset`, then a `Dataset` into a solvable `Problem`.
The bench runner depends on this abstraction rather than on file formats.
"""

from abc import ABC, abstractmethod
from typing import Any, Optional

from src.config import LossKind
from src.problem.model import Dataset, Problem


class BaseIngestion(ABC):
    """
    Abstract Interface for the Data Ingestion Layer.
    """

    @abstractmethod
    def load(self, source: str, **kwargs: Any) -> Dataset:
        """
        Loads samples from a specified source.

        Args:
            source (str): The origin of the data (e.g., a LIBSVM file path).
            **kwargs: Implementation-specific options such as `n_features`.

        Returns:
            Dataset: Parsed features and labels.
        """
        pass

    @abstractmethod
    def build_problem(
        self,
        dataset: Dataset,
        loss: LossKind,
        nu: float,
        threshold: Optional[float] = None,
    ) -> Problem:
        """
        Turns a dataset into a constrained problem instance.

        Args:
            dataset (Dataset): The loaded samples.
            loss (LossKind): Loss family for the f_i.
            nu (float): Regularization weight.
            threshold (float, optional): Graph construction threshold.

        Returns:
            Problem: A ready-to-solve instance.
        """
        pass
