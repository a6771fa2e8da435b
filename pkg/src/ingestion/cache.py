"""Binary dataset cache for fast reloads of large LIBSVM files.

Layout (all little-endian):

    b"AVRA1" | u64 n | u64 d | u64 nnz | u64 indptr[n+1] | u64 indices[nnz] | f64 data[nnz] | f64 labels[n]
"""

import os
from typing import Union

import numpy as np
import scipy.sparse as sp

from src.exceptions import ParseError
from src.problem.model import Dataset
from src.utils import setup_logger

logger = setup_logger(__name__)

MAGIC = b"AVRA1"
_U64 = np.dtype("<u8")
_F64 = np.dtype("<f8")


def dump_cache(dataset: Dataset, path: Union[str, os.PathLike]) -> None:
    """Writes `dataset` to `path` atomically (temp file + rename)."""
    X = dataset.features
    header = np.array([dataset.n, dataset.d, X.nnz], dtype=_U64)
    tmp = f"{os.fspath(path)}.tmp"
    with open(tmp, "wb") as f:
        f.write(MAGIC)
        f.write(header.tobytes())
        f.write(X.indptr.astype(_U64).tobytes())
        f.write(X.indices.astype(_U64).tobytes())
        f.write(X.data.astype(_F64).tobytes())
        f.write(dataset.labels.astype(_F64).tobytes())
    os.replace(tmp, path)
    logger.info(f"Cached dataset to {path} (n={dataset.n}, d={dataset.d}, nnz={X.nnz}).")


def load_cache(path: Union[str, os.PathLike]) -> Dataset:
    """
    Reads a dataset written by `dump_cache`.

    Raises:
        ParseError: If the magic bytes or sizes do not match the file, or if
            indptr decreases or a column index falls outside [0, d).
    """
    with open(path, "rb") as f:
        blob = f.read()
    if blob[:len(MAGIC)] != MAGIC:
        raise ParseError(f"{path} is not an AVRA1 dataset cache")
    offset = len(MAGIC)

    def take(dtype: np.dtype, count: int) -> np.ndarray:
        nonlocal offset
        size = dtype.itemsize * count
        if offset + size > len(blob):
            raise ParseError(f"{path} is truncated")
        out = np.frombuffer(blob, dtype=dtype, count=count, offset=offset)
        offset += size
        return out

    n, d, nnz = (int(v) for v in take(_U64, 3))
    indptr = take(_U64, n + 1).astype(np.int64)
    indices = take(_U64, nnz).astype(np.int64)
    data = take(_F64, nnz).astype(np.float64)
    labels = take(_F64, n).astype(np.float64)
    if offset != len(blob):
        raise ParseError(f"{path} has {len(blob) - offset} trailing bytes")
    try:
        features = sp.csr_matrix((data, indices, indptr), shape=(n, d))
        features.check_format(full_check=True)
    except ValueError as exc:
        raise ParseError(f"{path} holds a malformed sparse structure: {exc}") from exc
    return Dataset(features=features, labels=labels)
