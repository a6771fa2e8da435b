"""Main entry point for the benchmark CLI.

This script connects the Ingestion, Solver, Verify and Bench layers behind
four subcommands. Library code raises; this module catches, logs and turns
failures into a nonzero exit status.

Usage:
    bench run --config configs/desk.toml
    bench verify --seed 0
    bench inspect data/raw/a9a
    bench replay results/manifest.json --output-dir results/replay
"""

import argparse
import sys
from typing import List, Optional

from src.bench import inspect_dataset, load_run_config, replay_manifest, run_benchmark
from src.exceptions import AsvrgError
from src.utils import set_log_level, setup_logger
from src.verify import verify_suite

# Initialize logger
logger = setup_logger(__name__)


def run(config_path: str, output_dir: Optional[str] = None) -> int:
    """Executes a benchmark described by a TOML file.

    Args:
        config_path (str): Path to the run configuration.
        output_dir (str, optional): Overrides the configured output directory.

    Returns:
        int: 0 on success (diverged runs are recorded in the manifest), 1 on error.
    """
    try:
        config = load_run_config(config_path)
        manifest = run_benchmark(config, output_dir=output_dir)
    except (FileNotFoundError, ValueError, AsvrgError) as e:
        logger.error(f"Benchmark failed: {e}")
        return 1
    ok = len(manifest.runs) - len(manifest.failures)
    print(f"{ok}/{len(manifest.runs)} runs finished; manifest hash {manifest.config_hash[:12]}")
    return 0


def verify(seed: int = 0, inject_corrupt_schedule: bool = False) -> int:
    """Runs the verification suite; the exit status is 0 iff every check passes."""
    return verify_suite(seed, inject_corrupt_schedule)


def inspect(dataset_path: str, n_features: Optional[int] = None) -> int:
    """Prints n, d, nnz and both L_f conventions of a dataset."""
    try:
        inspect_dataset(dataset_path, n_features=n_features)
    except (FileNotFoundError, ValueError, AsvrgError) as e:
        logger.error(f"Cannot inspect {dataset_path}: {e}")
        return 1
    return 0


def replay(manifest_path: str, output_dir: Optional[str] = None) -> int:
    """Re-runs the configuration stored in a manifest."""
    try:
        manifest = replay_manifest(manifest_path, output_dir)
    except (FileNotFoundError, ValueError, AsvrgError) as e:
        logger.error(f"Replay failed: {e}")
        return 1
    print(f"replayed {len(manifest.runs)} runs")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bench", description="ASVRG-ADMM benchmark and verification CLI")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    sub = parser.add_subparsers(dest="mode", required=True)

    p_run = sub.add_parser("run", help="Run a benchmark")
    p_run.add_argument("--config", required=True, help="Path to the TOML run configuration")
    p_run.add_argument("--output-dir", default=None, help="Override the configured output directory")

    p_verify = sub.add_parser("verify", help="Run the verification suite")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--inject-corrupt-schedule", action="store_true", help=argparse.SUPPRESS)

    p_inspect = sub.add_parser("inspect", help="Summarize a LIBSVM dataset")
    p_inspect.add_argument("dataset")
    p_inspect.add_argument("--n-features", type=int, default=None)

    p_replay = sub.add_parser("replay", help="Re-run a benchmark from its manifest")
    p_replay.add_argument("manifest")
    p_replay.add_argument("--output-dir", default=None)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level:
        set_log_level(args.log_level)

    if args.mode == "run":
        return run(args.config, args.output_dir)
    if args.mode == "verify":
        return verify(args.seed, args.inject_corrupt_schedule)
    if args.mode == "inspect":
        return inspect(args.dataset, args.n_features)
    return replay(args.manifest, args.output_dir)


if __name__ == "__main__":
    sys.exit(main())
