"""Solver factory."""

from typing import Dict, Optional, Type

from src.config import SolverKind
from src.solvers.asvrg import AsvrgAdmmSolver
from src.solvers.base import BaseSolver, SolverConfig
from src.solvers.baselines import DeterministicAdmmSolver, SadmmSolver, SvrgAdmmSolver

SOLVERS: Dict[SolverKind, Type[BaseSolver]] = {
    SolverKind.ASVRG_ADMM: AsvrgAdmmSolver,
    SolverKind.SVRG_ADMM: SvrgAdmmSolver,
    SolverKind.SADMM: SadmmSolver,
    SolverKind.ADMM: DeterministicAdmmSolver,
}


def get_solver(
    kind: SolverKind,
    config: Optional[SolverConfig] = None,
    name: Optional[str] = None,
) -> BaseSolver:
    """
    Factory function to build the configured solver.

    Args:
        kind (SolverKind): Which method to run.
        config (SolverConfig, optional): Run parameters; defaults apply when omitted.
        name (str, optional): Label used in traces; defaults to the kind's value.

    Returns:
        BaseSolver: A concrete solver instance.
    """
    try:
        solver_cls = SOLVERS[SolverKind(kind)]
    except (KeyError, ValueError):
        raise ValueError(f"Unsupported solver kind: {kind}")
    return solver_cls(config=config, name=name)
