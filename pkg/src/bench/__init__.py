from .config import RunConfig, SolverSpec, SyntheticSpec, load_run_config
from .manifest import Manifest, RunEntry, load_manifest, write_manifest
from .plotting import plot_objective
from .runner import build_problem, inspect_dataset, replay_manifest, run_benchmark, summarize_dataset
from .traces import TRACE_COLUMNS, aggregate_traces, read_trace, trace_frame, write_csv_atomic

__all__ = [
    "Manifest",
    "RunConfig",
    "RunEntry",
    "SolverSpec",
    "SyntheticSpec",
    "TRACE_COLUMNS",
    "aggregate_traces",
    "build_problem",
    "inspect_dataset",
    "load_manifest",
    "load_run_config",
    "plot_objective",
    "read_trace",
    "replay_manifest",
    "run_benchmark",
    "summarize_dataset",
    "trace_frame",
    "write_csv_atomic",
    "write_manifest",
]
