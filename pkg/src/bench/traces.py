"""Trace CSV files and their seed-averaged aggregate.

Every float is written with 17 significant digits, which round-trips an IEEE
double exactly, so identical runs give byte-identical files.
"""

import os
import tempfile
from typing import Dict, List, Sequence

import pandas as pd

from src.solvers.base import TraceRecord

TRACE_COLUMNS = ["solver", "seed", "passes", "objective", "violation", "seconds"]
AGGREGATE_COLUMNS = ["solver", "seeds", "passes", "objective", "violation", "seconds"]
FLOAT_FORMAT = "%.17g"


def trace_filename(solver: str, seed: int) -> str:
    return f"trace_{solver}_seed{seed}.csv"


def trace_frame(records: Sequence[TraceRecord], record_wall_time: bool = True) -> pd.DataFrame:
    """Builds the fixed-schema frame; `seconds` is zeroed unless wall time is recorded."""
    frame = pd.DataFrame([r.model_dump() for r in records], columns=TRACE_COLUMNS)
    if not record_wall_time:
        frame["seconds"] = 0.0
    return frame.astype({"seed": "int64", "passes": "float64", "objective": "float64",
                         "violation": "float64", "seconds": "float64"})


def write_csv_atomic(frame: pd.DataFrame, path: str) -> None:
    """Writes to a temporary file in the target directory, then renames it into place."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            frame.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def read_trace(path: str) -> pd.DataFrame:
    return pd.read_csv(path, float_precision="round_trip")


def aggregate_traces(traces: Dict[str, List[pd.DataFrame]]) -> pd.DataFrame:
    """
    Averages each solver's traces over seeds.

    The pass grid of a solver is the union of the pass values recorded by its
    seeds; each seed contributes its last observation at or before a grid
    point. Solvers appear in insertion order.
    """
    rows = []
    value_columns = ["objective", "violation", "seconds"]
    for solver, frames in traces.items():
        if not frames:
            continue
        grid = pd.Index(sorted(set().union(*(frame["passes"].tolist() for frame in frames))), name="passes")
        aligned = [
            frame.set_index("passes")[value_columns].reindex(grid).ffill()
            for frame in frames
        ]
        mean = sum(aligned[1:], aligned[0]) / len(aligned)
        mean = mean.reset_index()
        mean.insert(0, "seeds", len(frames))
        mean.insert(0, "solver", solver)
        rows.append(mean)
    if not rows:
        return pd.DataFrame(columns=AGGREGATE_COLUMNS)
    return pd.concat(rows, ignore_index=True)[AGGREGATE_COLUMNS]
