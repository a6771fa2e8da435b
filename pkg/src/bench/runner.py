"""Benchmark orchestration.

Builds the problem once, fans the (solver, seed) jobs out to a process pool,
and writes one trace CSV per successful job, the seed-averaged aggregate, one
plot and the manifest. A diverging job is recorded in the manifest and the
remaining jobs continue.
"""

import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, TextIO

import pandas as pd

from src.bench.config import RunConfig, SyntheticSpec
from src.bench.manifest import Manifest, RunEntry, load_manifest, write_manifest
from src.bench.plotting import plot_objective
from src.bench.traces import aggregate_traces, trace_filename, trace_frame, write_csv_atomic
from src.config import SolverKind
from src.exceptions import AsvrgError, DivergenceError
from src.ingestion import (
    IngestionManager,
    chain_graph,
    build_feature_graph,
    file_checksum,
    graph_guided_problem,
    make_synthetic_dataset,
)
from src.ingestion.base import BaseIngestion
from src.problem.model import Dataset, Problem, lasso_objective, lf_conventions
from src.solvers import SolverConfig, get_solver
from src.utils import setup_logger

logger = setup_logger(__name__)

AGGREGATE_FILE = "aggregate.csv"
MANIFEST_FILE = "manifest.json"


@dataclass(frozen=True)
class Job:
    label: str
    kind: SolverKind
    config: SolverConfig
    seed: int


@dataclass
class JobResult:
    job: Job
    status: str
    seconds: float
    frame: Optional[pd.DataFrame] = None
    message: Optional[str] = None
    lasso_objective: Optional[float] = None


def run_job(problem: Problem, job: Job, record_wall_time: bool) -> JobResult:
    """Runs one solver on one seed; solver errors become a non-ok status."""
    start = time.perf_counter()
    solver = get_solver(job.kind, job.config, job.label)
    try:
        output = solver.run(problem, seed=job.seed)
    except DivergenceError as e:
        logger.warning(f"{job.label} seed={job.seed} diverged: {e}")
        return JobResult(job, "diverged", time.perf_counter() - start, message=str(e))
    except AsvrgError as e:
        logger.warning(f"{job.label} seed={job.seed} failed: {e}")
        return JobResult(job, "failed", time.perf_counter() - start, message=str(e))
    elapsed = time.perf_counter() - start
    final = lasso_objective(problem, output.x)
    logger.info(f"{job.label} seed={job.seed} finished: f(x) + nu*||Fx||_1 = {final:.10g}")
    return JobResult(job, "ok", elapsed, frame=trace_frame(output.trace, record_wall_time), lasso_objective=final)


def _synthetic_problem(config: RunConfig, spec: SyntheticSpec) -> Problem:
    dataset = make_synthetic_dataset(
        spec.n, spec.d, config.loss, seed=spec.seed,
        feature_scale=spec.feature_scale, density=spec.density, noise=spec.noise,
    )
    graph = chain_graph(dataset.d) if spec.chain_graph else build_feature_graph(dataset, config.threshold)
    return graph_guided_problem(dataset, config.loss, config.nu, graph)


def build_problem(config: RunConfig, ingestion: Optional[BaseIngestion] = None) -> Problem:
    """Loads or generates the dataset and assembles the fused-lasso problem."""
    if config.synthetic is not None:
        return _synthetic_problem(config, config.synthetic)
    ingestion = ingestion or IngestionManager()
    dataset = ingestion.load(config.dataset, n_features=config.n_features)
    return ingestion.build_problem(dataset, config.loss, config.nu, config.threshold)


def make_jobs(config: RunConfig) -> List[Job]:
    """Solver-major job list; this order fixes the order of manifest entries."""
    return [
        Job(spec.name, spec.kind, spec.solver_config(config.max_passes), seed)
        for spec in config.solvers
        for seed in config.seeds
    ]


def _execute(problem: Problem, jobs: List[Job], config: RunConfig) -> List[JobResult]:
    workers = config.workers or os.cpu_count() or 1
    workers = min(workers, len(jobs))
    if workers == 1:
        return [run_job(problem, job, config.record_wall_time) for job in jobs]
    logger.info(f"Running {len(jobs)} jobs on {workers} worker processes")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run_job, problem, job, config.record_wall_time) for job in jobs]
        return [future.result() for future in futures]


def run_benchmark(
    config: RunConfig,
    ingestion: Optional[BaseIngestion] = None,
    output_dir: Optional[str] = None,
) -> Manifest:
    """
    Executes a benchmark and writes its artifacts.

    Args:
        config (RunConfig): The run description.
        ingestion (BaseIngestion, optional): Dataset loader; defaults to IngestionManager.
        output_dir (str, optional): Overrides `config.output_dir`.

    Returns:
        Manifest: The manifest that was written next to the traces.

    Raises:
        FileNotFoundError: If the dataset does not exist.
        ParseError: If the dataset is malformed.
    """
    out = output_dir or config.output_dir
    datasets: Dict[str, str] = {}
    if config.dataset is not None:
        datasets[config.dataset] = file_checksum(config.dataset)
    problem = build_problem(config, ingestion)
    logger.info(
        f"Benchmark on {config.dataset_name}: n={problem.n}, d={problem.d}, "
        f"constraints={problem.y_dim}, L_f={problem.l_f:.6g}, L_Q={problem.l_q:.6g}"
    )

    jobs = make_jobs(config)
    results = _execute(problem, jobs, config)

    runs: List[RunEntry] = []
    traces: Dict[str, List[pd.DataFrame]] = {spec.name: [] for spec in config.solvers}
    for result in results:
        job = result.job
        trace_file = None
        if result.frame is not None:
            trace_file = trace_filename(job.label, job.seed)
            write_csv_atomic(result.frame, os.path.join(out, trace_file))
            traces[job.label].append(result.frame)
        runs.append(
            RunEntry(
                solver=job.label, seed=job.seed, status=result.status,
                seconds=result.seconds, trace_file=trace_file, message=result.message,
                lasso_objective=result.lasso_objective,
            )
        )

    aggregate = aggregate_traces(traces)
    write_csv_atomic(aggregate, os.path.join(out, AGGREGATE_FILE))
    plot_file = f"{config.dataset_name}.svg"
    plot_objective(
        aggregate,
        os.path.join(out, plot_file),
        title=config.dataset_name,
        kinds={spec.name: spec.kind.value for spec in config.solvers},
    )

    manifest = Manifest(
        config=config.model_dump(mode="json"),
        config_hash=config.config_hash(),
        seeds=list(config.seeds),
        datasets=datasets,
        runs=runs,
        aggregate_file=AGGREGATE_FILE,
        plot_file=plot_file,
    )
    write_manifest(manifest, os.path.join(out, MANIFEST_FILE))
    failed = manifest.failures
    if failed:
        logger.warning(f"{len(failed)} of {len(runs)} runs did not finish; see {MANIFEST_FILE}")
    logger.info(f"Benchmark artifacts written to {out}")
    return manifest


def replay_manifest(path: str, output_dir: Optional[str] = None) -> Manifest:
    """
    Re-runs the configuration stored in a manifest.

    Raises:
        ValueError: If a dataset's checksum no longer matches the manifest.
    """
    manifest = load_manifest(path)
    config = RunConfig.model_validate(manifest.config)
    if config.config_hash() != manifest.config_hash:
        raise ValueError("manifest config does not match its recorded hash")
    for dataset, checksum in manifest.datasets.items():
        if not os.path.exists(dataset):
            raise FileNotFoundError(f"Dataset not found: {dataset}")
        if file_checksum(dataset) != checksum:
            raise ValueError(f"checksum of {dataset} differs from the manifest")
    return run_benchmark(config, output_dir=output_dir or os.path.dirname(os.path.abspath(path)))


def summarize_dataset(dataset: Dataset) -> Dict[str, float]:
    """n, d, nnz and L_f under both loss-curvature conventions."""
    conventions = lf_conventions(dataset)
    return {
        "n": dataset.n,
        "d": dataset.d,
        "nnz": dataset.nnz,
        "lf_squared": conventions["squared"],
        "lf_logistic": conventions["logistic"],
    }


def inspect_dataset(path: str, stream: Optional[TextIO] = None, n_features: Optional[int] = None) -> Dict[str, float]:
    """
    Prints the dataset summary to `stream` (stdout by default).

    Raises:
        FileNotFoundError: If `path` does not exist.
        ParseError: On malformed input, with line and column.
    """
    stream = stream or sys.stdout
    summary = summarize_dataset(IngestionManager().load(path, n_features=n_features))
    print(f"dataset: {path}", file=stream)
    print(f"n: {summary['n']}", file=stream)
    print(f"d: {summary['d']}", file=stream)
    print(f"nnz: {summary['nnz']}", file=stream)
    print(f"L_f (squared-loss convention): {summary['lf_squared']:.6g}", file=stream)
    print(f"L_f (logistic-loss convention): {summary['lf_logistic']:.6g}", file=stream)
    return summary
