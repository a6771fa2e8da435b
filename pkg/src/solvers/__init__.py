from .asvrg import AsvrgAdmmSolver, inner_step, outer_step, output_point, resolve_budget, run_asvrg_admm
from .base import (
    BaseSolver,
    SolverConfig,
    SolverOutput,
    StepCallback,
    StepRecord,
    TraceRecord,
    TraceRecorder,
    draw_sample,
    make_rng,
)
from .baselines import (
    DeterministicAdmmSolver,
    SadmmSolver,
    SvrgAdmmSolver,
    run_deterministic_admm,
    run_sadmm,
    run_svrg_admm,
)
from .factory import get_solver
from .schedule import WeightSchedule, advance_weights, make_schedule, pinned_schedule
from .updates import (
    SolverState,
    feasible_start,
    lambda_update,
    soft_threshold,
    svrg_gradient,
    x_update_exact,
    x_update_linearized,
    y_update,
)

__all__ = [
    "AsvrgAdmmSolver",
    "BaseSolver",
    "DeterministicAdmmSolver",
    "SadmmSolver",
    "SolverConfig",
    "SolverOutput",
    "SolverState",
    "StepCallback",
    "StepRecord",
    "SvrgAdmmSolver",
    "TraceRecord",
    "TraceRecorder",
    "WeightSchedule",
    "advance_weights",
    "draw_sample",
    "feasible_start",
    "get_solver",
    "inner_step",
    "lambda_update",
    "make_rng",
    "make_schedule",
    "outer_step",
    "output_point",
    "pinned_schedule",
    "resolve_budget",
    "run_asvrg_admm",
    "run_deterministic_admm",
    "run_sadmm",
    "run_svrg_admm",
    "soft_threshold",
    "svrg_gradient",
    "x_update_exact",
    "x_update_linearized",
    "y_update",
]
