from .checks import (
    check_gradient_fd,
    check_reduction_equivalence,
    check_schedule_properties,
    check_subproblem_optimality,
    check_unbiasedness,
    check_variance_bound,
    corrupt_advance_weights,
    replay_witness,
)
from .oracles import OracleRun, transcribe_algorithm
from .report import CheckReport
from .suite import format_reports, run_checks, verify_suite

__all__ = [
    "CheckReport",
    "OracleRun",
    "check_gradient_fd",
    "check_reduction_equivalence",
    "check_schedule_properties",
    "check_subproblem_optimality",
    "check_unbiasedness",
    "check_variance_bound",
    "corrupt_advance_weights",
    "format_reports",
    "replay_witness",
    "run_checks",
    "transcribe_algorithm",
    "verify_suite",
]
