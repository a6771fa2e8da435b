"""Runs every check on built-in synthetic instances."""

import json
import sys
from typing import List, Optional, TextIO, Tuple

import numpy as np

from src.config import LossKind
from src.ingestion.synthetic import desk_problem
from src.linalg import DenseVector
from src.problem.model import Problem
from src.solvers.asvrg import run_asvrg_admm
from src.solvers.base import SolverConfig, StepRecord
from src.utils import setup_logger
from src.verify.checks import (
    check_gradient_fd,
    check_reduction_equivalence,
    check_schedule_properties,
    check_subproblem_optimality,
    check_unbiasedness,
    check_variance_bound,
    corrupt_advance_weights,
)
from src.verify.report import CheckReport

logger = setup_logger(__name__)

SCHEDULE_STEPS = 1000
RANDOM_STATES = 100
TRAJECTORY_STEPS = 100


def random_states(p: Problem, count: int, seed: int) -> List[Tuple[DenseVector, DenseVector]]:
    """Draws (x_md, x_snap) pairs with unit-scale coordinates."""
    rng = np.random.default_rng(seed)
    return [(rng.standard_normal(p.d), rng.standard_normal(p.d)) for _ in range(count)]


def record_trajectory(p: Problem, chi: int, seed: int, steps: int = TRAJECTORY_STEPS) -> List[StepRecord]:
    """Records `steps` inner steps of one outer iteration of the accelerated method."""
    records: List[StepRecord] = []
    config = SolverConfig(n_outer=1, inner=steps, chi=chi)
    run_asvrg_admm(p, config, seed, on_step=records.append)
    return records


def run_checks(seed: int = 0, inject_corrupt_schedule: bool = False) -> List[CheckReport]:
    """
    Builds the instances from `seed` and returns one report per check.

    Args:
        seed (int): Seeds the instances, the random states and the solver runs.
        inject_corrupt_schedule (bool): Replaces the weight recursion with a
            broken one so the schedule check must fail.
    """
    logistic = desk_problem(n=200, d=30, loss=LossKind.LOGISTIC, seed=seed)
    desk = desk_problem(n=100, d=20, loss=LossKind.SQUARED, seed=seed)
    states = random_states(logistic, RANDOM_STATES, seed)

    advance = corrupt_advance_weights if inject_corrupt_schedule else None
    return [
        check_schedule_properties(SCHEDULE_STEPS, advance),
        check_unbiasedness(logistic, states),
        check_variance_bound(logistic, states),
        check_gradient_fd(logistic, points=20, seed=seed),
        check_gradient_fd(desk, points=20, seed=seed),
        check_subproblem_optimality(desk, record_trajectory(desk, chi=1, seed=seed)),
        check_subproblem_optimality(desk, record_trajectory(desk, chi=0, seed=seed)),
        check_reduction_equivalence(desk, seed),
    ]


def format_reports(reports: List[CheckReport]) -> str:
    """One summary line per report, followed by the witness of each failure."""
    lines = []
    for report in reports:
        lines.append(report.summary())
        if not report.passed:
            lines.append(f"  witness: {json.dumps(report.witness, sort_keys=True)}")
    failed = sum(not r.passed for r in reports)
    lines.append(f"{len(reports) - failed}/{len(reports)} checks passed")
    return "\n".join(lines)


def verify_suite(seed: int = 0, inject_corrupt_schedule: bool = False, stream: Optional[TextIO] = None) -> int:
    """
    Runs all checks and prints their reports.

    Returns:
        int: 0 if every check passed, 1 otherwise.
    """
    stream = stream or sys.stdout
    reports = run_checks(seed, inject_corrupt_schedule)
    print(format_reports(reports), file=stream)
    failed = [r.name for r in reports if not r.passed]
    if failed:
        logger.error(f"verification failed: {', '.join(failed)}")
        return 1
    return 0
