"""LIBSVM text-format loading for the ingestion pipeline.

This module parses `label idx:val idx:val ...` lines into a `Dataset` in a
single streaming pass (constant memory per line; only the CSR arrays grow),
and writes datasets back out in the same format with round-trip exact values.
"""

import math
import os
import re
from array import array
from typing import BinaryIO, Iterable, Optional, Union

import numpy as np
import scipy.sparse as sp

from src.exceptions import ParseError
from src.problem.model import Dataset
from src.utils import setup_logger

logger = setup_logger(__name__)

_TOKEN = re.compile(rb"\S+")


def _parse_float(token: bytes, line_no: int, column: int, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"malformed {what} {token.decode(errors='replace')!r}", line_no, column) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite {what} {token.decode(errors='replace')!r}", line_no, column)
    return value


def parse_libsvm(source: Union[BinaryIO, Iterable[bytes]], n_features: Optional[int] = None) -> Dataset:
    """
    Parses a LIBSVM/svmlight byte stream into a Dataset.

    One record per non-empty line. Indices are 1-based in the file and mapped
    to 0-based columns. Text after `#` on a line is ignored. Explicit zero
    values are dropped so the resulting matrix stores no zeros.

    Args:
        source: A binary file object or any iterable of byte lines.
        n_features (int, optional): Explicit dimension d. When omitted d is the
            largest index seen. Useful when train/test files disagree.

    Returns:
        Dataset: Features as canonical CSR plus labels.

    Raises:
        ParseError: On malformed tokens (with line and column), non-increasing
            indices, an index beyond `n_features`, an empty stream, or a
            stream without any feature index.
    """
    labels = array("d")
    indices = array("q")
    data = array("d")
    indptr = array("q", [0])
    max_index = 0

    for line_no, raw in enumerate(source, start=1):
        line = raw.split(b"#", 1)[0]
        tokens = list(_TOKEN.finditer(line))
        if not tokens:
            continue

        labels.append(_parse_float(tokens[0].group(), line_no, tokens[0].start() + 1, "label"))
        previous = 0
        for match in tokens[1:]:
            token = match.group()
            column = match.start() + 1
            idx_part, sep, val_part = token.partition(b":")
            if not sep or not idx_part.isdigit():
                raise ParseError(f"malformed feature token {token.decode(errors='replace')!r}", line_no, column)
            index = int(idx_part)
            if index < 1:
                raise ParseError(f"feature index must be >= 1, got {index}", line_no, column)
            if index <= previous:
                raise ParseError(f"feature indices must be strictly increasing ({previous} then {index})", line_no, column)
            if n_features is not None and index > n_features:
                raise ParseError(f"feature index {index} exceeds declared dimension {n_features}", line_no, column)
            value = _parse_float(val_part, line_no, column, "feature value")
            previous = index
            if value != 0.0:
                indices.append(index - 1)
                data.append(value)
        max_index = max(max_index, previous)
        indptr.append(len(indices))

    if not labels:
        raise ParseError("empty dataset")

    d = n_features if n_features is not None else max_index
    if d < 1:
        raise ParseError("no features")
    features = sp.csr_matrix(
        (np.frombuffer(data, dtype=np.float64).copy(),
         np.frombuffer(indices, dtype=np.int64).copy(),
         np.frombuffer(indptr, dtype=np.int64).copy()),
        shape=(len(labels), d),
    )
    dataset = Dataset(features=features, labels=np.frombuffer(labels, dtype=np.float64).copy())
    logger.info(f"Parsed {dataset.n} samples, {dataset.d} attributes, {dataset.nnz} stored entries.")
    return dataset


def load_libsvm(path: Union[str, os.PathLike], n_features: Optional[int] = None) -> Dataset:
    """
    Loads a LIBSVM file from disk.

    Raises:
        FileNotFoundError: If the file does not exist.
        ParseError: As for `parse_libsvm`.
    """
    if not os.path.exists(path):
        logger.error(f"Dataset not found: {path}")
        raise FileNotFoundError(f"Dataset not found: {path}")
    logger.info(f"Loading LIBSVM file: {path} ({os.path.getsize(path)} bytes)")
    with open(path, "rb") as f:
        return parse_libsvm(f, n_features=n_features)


def serialize_libsvm(dataset: Dataset, stream: BinaryIO) -> None:
    """
    Writes a Dataset in LIBSVM format.

    Values are written with Python's shortest round-trip float repr, so
    `parse_libsvm` reproduces every label and feature bit-exactly.
    """
    X = dataset.features
    for i in range(dataset.n):
        start, stop = X.indptr[i], X.indptr[i + 1]
        parts = [repr(float(dataset.labels[i]))]
        parts.extend(
            f"{int(j) + 1}:{float(v)!r}" for j, v in zip(X.indices[start:stop], X.data[start:stop])
        )
        stream.write((" ".join(parts) + "\n").encode("ascii"))
