"""Single-step updates shared by all ADMM variants.

Sign convention: the augmented Lagrangian carries +<lam, A x + B y - c>, and
the dual step is ascent, lam <- lam + rho (A x + B y - c).
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.sparse.linalg import lsqr

from src.exceptions import UnsupportedProblemError
from src.linalg import DenseVector, SpdFactorization, matvec, matvec_transpose, solve_spd
from src.problem.model import Problem, component_gradient
from src.solvers.schedule import WeightSchedule

FEASIBILITY_TOL = 1e-10


@dataclass
class SolverState:
    """Iterates of the accelerated method.

    `x, y, lam` are the current inner iterates, `*_ag` the aggregates, `x_md`
    the middle point and `*_snap` the snapshot triple with its full gradient
    `v_snap`. `v` is the variance-reduced gradient of the current step.
    """
    x: DenseVector
    y: DenseVector
    lam: DenseVector
    x_ag: DenseVector
    y_ag: DenseVector
    lam_ag: DenseVector
    x_md: DenseVector
    x_snap: DenseVector
    y_snap: DenseVector
    lam_snap: DenseVector
    v_snap: DenseVector
    rng: np.random.Generator = field(repr=False)
    v: Optional[DenseVector] = None
    t: int = 0
    s: int = 1

    @classmethod
    def initial(cls, x0: DenseVector, y0: DenseVector, lam0: DenseVector, rng: np.random.Generator) -> "SolverState":
        """Starts every sequence at the (feasible) snapshot triple."""
        return cls(
            x=x0.copy(), y=y0.copy(), lam=lam0.copy(),
            x_ag=x0.copy(), y_ag=y0.copy(), lam_ag=lam0.copy(),
            x_md=x0.copy(),
            x_snap=x0.copy(), y_snap=y0.copy(), lam_snap=lam0.copy(),
            v_snap=np.zeros_like(x0),
            rng=rng,
        )


def soft_threshold(v: DenseVector, tau: float) -> DenseVector:
    """Proximal map of tau * ||.||_1: sign(v) * max(|v| - tau, 0)."""
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    return np.sign(v) * np.maximum(np.abs(v) - tau, 0.0)


def svrg_gradient(
    p: Problem,
    i: int,
    x_md: DenseVector,
    x_snap: DenseVector,
    v_snap: DenseVector,
) -> DenseVector:
    """Variance-reduced gradient grad f_i(x_md) - grad f_i(x_snap) + v_snap."""
    return component_gradient(p, i, x_md) - component_gradient(p, i, x_snap) + v_snap


def x_update_linearized(state: SolverState, sched: WeightSchedule, p: Problem) -> DenseVector:
    """
    Linearized x-step (chi = 1), no linear solve:

        x - (A^T lam + v + theta A^T (A x + B y - c)) / eta
    """
    r = matvec(p.A, state.x) + matvec(p.B, state.y) - p.c
    direction = matvec_transpose(p.A, state.lam) + state.v + sched.theta * matvec_transpose(p.A, r)
    return state.x - direction / sched.eta


def exact_rhs(state: SolverState, sched: WeightSchedule, p: Problem) -> DenseVector:
    """Right-hand side eta x - v - A^T lam - theta A^T (B y - c) of the exact x-step."""
    r = matvec(p.B, state.y) - p.c
    return (
        sched.eta * state.x
        - state.v
        - matvec_transpose(p.A, state.lam)
        - sched.theta * matvec_transpose(p.A, r)
    )


def x_update_exact(
    state: SolverState,
    sched: WeightSchedule,
    p: Problem,
    factor: Optional[SpdFactorization],
) -> DenseVector:
    """
    Exact x-step (chi = 0): solves (eta I + theta A^T A) x = rhs.

    Since eta = lbar * alpha_2 and theta = beta1 * alpha_2, the solve reuses the
    factor of lbar I + beta1 A^T A and divides by alpha_2.

    Raises:
        UnsupportedProblemError: If no factorization is available.
    """
    if factor is None:
        raise UnsupportedProblemError(
            "exact x-update needs a factorization of lbar I + beta1 A^T A; "
            "it is unavailable for this problem size, configure chi=1"
        )
    return solve_spd(factor, exact_rhs(state, sched, p)) / sched.alpha2


def y_target(state: SolverState, theta: float, p: Problem) -> DenseVector:
    """A x - c + lam / theta, the point the y-step shrinks (B = -I)."""
    return matvec(p.A, state.x) - p.c + state.lam / theta


def y_update(state: SolverState, sched: WeightSchedule, p: Problem) -> DenseVector:
    """
    Closed-form y-step for B = -I and g = nu ||.||_1:

        argmin_y nu ||y||_1 + <lam, A x - y - c> + theta/2 ||A x - y - c||^2
        = soft_threshold(A x - c + lam / theta, nu / theta)

    `state.x` must already hold the new x and `state.lam` the previous multiplier.

    Raises:
        UnsupportedProblemError: If B is not -I.
    """
    if not p.b_is_negative_identity:
        raise UnsupportedProblemError("closed-form y-update supports only B = -I with g = nu * ||y||_1")
    return soft_threshold(y_target(state, sched.theta, p), p.nu / sched.theta)


def lambda_update(state: SolverState, sched: WeightSchedule, p: Problem) -> DenseVector:
    """Dual ascent lam + rho (A x + B y - c) at the new (x, y)."""
    r = matvec(p.A, state.x) + matvec(p.B, state.y) - p.c
    return state.lam + sched.rho * r


def feasible_start(p: Problem) -> Tuple[DenseVector, DenseVector, DenseVector]:
    """
    Returns a feasible initial triple (x0, y0, lam0) with x0 = 0 and lam0 = 0.

    For B = -I the choice y0 = -c is exact; any other B goes through a
    least-squares solve of B y = c.

    Raises:
        UnsupportedProblemError: If B y = c has no solution to 1e-10.
    """
    x0 = np.zeros(p.d)
    lam0 = np.zeros(p.c.shape[0])
    if p.b_is_negative_identity:
        y0 = -p.c.copy()
    else:
        y0 = np.asarray(lsqr(p.B, p.c, atol=1e-14, btol=1e-14)[0], dtype=np.float64)
    violation = float(np.linalg.norm(matvec(p.A, x0) + matvec(p.B, y0) - p.c))
    if violation > FEASIBILITY_TOL:
        raise UnsupportedProblemError(
            f"no feasible start with x0 = 0: ||B y0 - c|| = {violation:.3e} exceeds {FEASIBILITY_TOL:g}"
        )
    return x0, y0, lam0
