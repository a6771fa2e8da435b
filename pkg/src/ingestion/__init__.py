from .loader import load_libsvm, parse_libsvm, serialize_libsvm
from .cache import dump_cache, load_cache
from .graph import (
    FeatureGraph,
    build_feature_graph,
    build_penalty_matrix,
    chain_graph,
    graph_guided_problem,
)
from .synthetic import desk_problem, make_synthetic_dataset
from .base import BaseIngestion
from .manager import IngestionManager, file_checksum

__all__ = [
    "load_libsvm",
    "parse_libsvm",
    "serialize_libsvm",
    "dump_cache",
    "load_cache",
    "FeatureGraph",
    "build_feature_graph",
    "build_penalty_matrix",
    "chain_graph",
    "graph_guided_problem",
    "desk_problem",
    "make_synthetic_dataset",
    "BaseIngestion",
    "IngestionManager",
    "file_checksum",
]
