"""Weight and penalty schedules of the accelerated method.

Per outer iteration s the method uses convex weights (alpha_1, alpha_2, alpha_3)
and derived penalties

    theta_s = beta1 * alpha_2,   rho_s = beta2 / alpha_2,
    eta_s   = (lbar + chi * beta1 * ||A||_2^2) * alpha_2,

with beta1 = N, beta2 = 1/N (see `default_penalties`) and lbar = L_Q / alpha_{3,1} + L_f
by default. The per-outer rule uses lbar_s = L_Q / alpha_{3,s} + L_f instead, which
still meets eta_s >= lbar_s alpha_2 + chi theta_s ||A||^2 at every s and shrinks
as alpha_3 grows.
The weights follow

    alpha_2' = (sqrt(alpha_2^4 + 4 alpha_2^2) - alpha_2^2) / 2
    alpha_1' = alpha_1 (1 - alpha_2'),   alpha_3' = (1 - alpha_1)(1 - alpha_2'),

which keeps them on the simplex, makes alpha_1 and alpha_2 decrease and
alpha_3 increase, and gives alpha_{2,s} <= 2/(s+2) when alpha_{2,1} <= 2/3.
"""

import math
from dataclasses import dataclass
from typing import Iterator, Tuple

from src.config import LbarRule
from src.exceptions import ScheduleError
from src.problem.model import Problem
from src.solvers.base import SolverConfig

SIMPLEX_TOL = 1e-12


@dataclass(frozen=True)
class WeightSchedule:
    """Parameters of outer iteration s (1-based) plus the run-wide constants."""
    s: int
    alpha1: float
    alpha2: float
    alpha3: float
    theta: float
    rho: float
    eta: float
    beta1: float
    beta2: float
    lbar: float
    chi: int
    m: int
    n_outer: int


def _check_weights(alpha1: float, alpha2: float, alpha3: float) -> None:
    for name, value in (("alpha1", alpha1), ("alpha2", alpha2), ("alpha3", alpha3)):
        if not 0.0 < value < 1.0:
            raise ScheduleError(f"{name} must lie in (0, 1), got {value!r}")
    total = alpha1 + alpha2 + alpha3
    if abs(total - 1.0) > SIMPLEX_TOL:
        raise ScheduleError(f"weights must sum to 1, got {total!r}")


def advance_weights(alpha1: float, alpha2: float, alpha3: float) -> Tuple[float, float, float]:
    """
    Applies one step of the weight recursion.

    Raises:
        ScheduleError: If the inputs are not strictly inside the simplex.
    """
    _check_weights(alpha1, alpha2, alpha3)
    a2_sq = alpha2 * alpha2
    alpha2_next = (math.sqrt(a2_sq * a2_sq + 4.0 * a2_sq) - a2_sq) / 2.0
    alpha1_next = alpha1 * (1.0 - alpha2_next)
    alpha3_next = (1.0 - alpha1) * (1.0 - alpha2_next)
    return alpha1_next, alpha2_next, alpha3_next


def lbar_constant(problem: Problem, alpha3: float) -> float:
    """lbar = L_Q / alpha_3 + L_f. With alpha_{3,1} it is valid for every s since alpha_3 increases."""
    return problem.l_q / alpha3 + problem.l_f


def default_penalties(n_outer: int, alpha2_last: float) -> Tuple[float, float]:
    """
    Returns (beta1, beta2) = (N, 1/N), or (1/alpha_{2,N}, alpha_{2,N}) when N * alpha_{2,N} < 1.

    theta_s >= rho_s needs beta1 * beta2 >= 1 and beta1 * alpha_{2,s} >= 1. With
    alpha_{2,1} = 2/3 the (N, 1/N) pair misses the second condition for N <= 2.
    """
    if n_outer * alpha2_last >= 1.0:
        return float(n_outer), 1.0 / n_outer
    return 1.0 / alpha2_last, alpha2_last


def make_schedule(problem: Problem, config: SolverConfig, n_outer: int, m: int) -> Iterator[WeightSchedule]:
    """
    Returns the schedules for s = 1, ..., N+1, validated up front.

    The (N+1)-th entry is only used for the output weighting.

    Args:
        problem (Problem): Supplies L_Q, L_f and ||A||_2^2.
        config (SolverConfig): chi, initial weights, the lbar rule and optional beta overrides.
        n_outer (int): N >= 1.
        m (int): Inner-loop length >= 1.

    Raises:
        ScheduleError: If N, m or the initial weights are out of range.
    """
    if n_outer < 1:
        raise ScheduleError(f"N must be >= 1, got {n_outer}")
    if m < 1:
        raise ScheduleError(f"m must be >= 1, got {m}")
    if not 0.0 < config.alpha2_init <= 2.0 / 3.0 + SIMPLEX_TOL:
        raise ScheduleError(f"alpha2_init must lie in (0, 2/3], got {config.alpha2_init!r}")
    if not 0.0 < config.alpha3_init < 1.0 / 3.0:
        raise ScheduleError(f"alpha3_init must lie in (0, 1/3), got {config.alpha3_init!r}")

    weights = [(1.0 - config.alpha2_init - config.alpha3_init, config.alpha2_init, config.alpha3_init)]
    for _ in range(n_outer):
        weights.append(advance_weights(*weights[-1]))

    default_beta1, default_beta2 = default_penalties(n_outer, weights[n_outer - 1][1])
    beta1 = default_beta1 if config.beta1 is None else config.beta1
    beta2 = default_beta2 if config.beta2 is None else config.beta2
    global_lbar = lbar_constant(problem, config.alpha3_init)
    penalty = config.chi * beta1 * problem.a_norm_sq

    def lbar_at(alpha3: float) -> float:
        if config.lbar_rule == LbarRule.PER_OUTER:
            return lbar_constant(problem, alpha3)
        return global_lbar

    return iter([
        WeightSchedule(
            s=s,
            alpha1=alpha1,
            alpha2=alpha2,
            alpha3=alpha3,
            theta=beta1 * alpha2,
            rho=beta2 / alpha2,
            eta=(lbar_at(alpha3) + penalty) * alpha2,
            beta1=beta1,
            beta2=beta2,
            lbar=lbar_at(alpha3),
            chi=config.chi,
            m=m,
            n_outer=n_outer,
        )
        for s, (alpha1, alpha2, alpha3) in enumerate(weights, start=1)
    ])


def pinned_schedule(beta: float, eta: float, chi: int, n_outer: int, m: int) -> Iterator[WeightSchedule]:
    """
    Yields the constant schedule alpha = (0, 1, 0), theta = rho = beta, eta fixed.

    With these weights the middle and aggregate points collapse onto the
    current iterate and the accelerated method is exactly SVRG-ADMM. For the
    exact x-update the factor is built from (lbar, beta1) = (eta, beta).
    """
    for s in range(1, n_outer + 2):
        yield WeightSchedule(
            s=s,
            alpha1=0.0,
            alpha2=1.0,
            alpha3=0.0,
            theta=beta,
            rho=beta,
            eta=eta,
            beta1=beta,
            beta2=beta,
            lbar=eta,
            chi=chi,
            m=m,
            n_outer=n_outer,
        )
