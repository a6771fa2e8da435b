"""Accelerated stochastic variance-reduced ADMM.

Each outer iteration s takes one full-gradient snapshot, then m inner steps
that move a middle point, draw one sample, form the variance-reduced gradient
and update x, y and lam together with their aggregates. The snapshot triple of
the next outer iteration is the mean of the m aggregate iterates.
"""

import logging
import math
import time
from typing import Iterable, List, Optional, Tuple

import numpy as np

from src.config import OutputWeighting, SolverKind
from src.linalg import DenseVector, SpdFactorization, factor_spd
from src.problem.model import Problem, full_gradient, objective
from src.solvers.base import (
    BaseSolver,
    SolverConfig,
    SolverOutput,
    StepCallback,
    StepRecord,
    TraceRecorder,
    check_finite,
    draw_sample,
    make_rng,
)
from src.solvers.schedule import WeightSchedule, make_schedule
from src.solvers.updates import (
    SolverState,
    feasible_start,
    lambda_update,
    svrg_gradient,
    x_update_exact,
    x_update_linearized,
    y_update,
)
from src.utils import setup_logger

logger = setup_logger(__name__)


def resolve_budget(config: SolverConfig, n: int) -> Tuple[int, int]:
    """
    Returns (N, m) for a variance-reduced run.

    m defaults to n. Without an explicit N, the largest N whose work
    N * (1 + m/n) stays within `max_passes` is used, and at least one.
    """
    m = config.inner if config.inner is not None else n
    if config.n_outer is not None:
        return config.n_outer, m
    per_outer = 1.0 + m / n
    return max(1, math.floor(config.max_passes / per_outer)), m


def build_factor(p: Problem, sched: WeightSchedule) -> Optional[SpdFactorization]:
    """Factors lbar I + beta1 A^T A when the exact x-step is used (once per distinct lbar)."""
    if sched.chi == 1:
        return None
    return factor_spd(p.A, sched.lbar, sched.beta1)


def take_snapshot(state: SolverState, p: Problem, recorder: TraceRecorder) -> None:
    """Full gradient at the snapshot point, charged as one effective pass."""
    state.v_snap = full_gradient(p, state.x_snap)
    recorder.charge_full()


def inner_step(
    state: SolverState,
    sched: WeightSchedule,
    p: Problem,
    factor: Optional[SpdFactorization] = None,
    on_step: Optional[StepCallback] = None,
) -> int:
    """
    Applies one inner iteration in place and returns the drawn sample index.

    Order: middle point, sample, variance-reduced gradient, x, x aggregate,
    y, y aggregate, lam, lam aggregate. All three aggregates use the same
    weights as the middle point.
    """
    a1, a2, a3 = sched.alpha1, sched.alpha2, sched.alpha3
    state.x_md = a1 * state.x_ag + a2 * state.x + a3 * state.x_snap
    i = draw_sample(state.rng, p.n)
    state.v = svrg_gradient(p, i, state.x_md, state.x_snap, state.v_snap)

    x_prev, y_prev, lam_prev = state.x, state.y, state.lam
    if sched.chi == 1:
        state.x = x_update_linearized(state, sched, p)
    else:
        state.x = x_update_exact(state, sched, p, factor)
    state.x_ag = a1 * state.x_ag + a2 * state.x + a3 * state.x_snap
    state.y = y_update(state, sched, p)
    state.y_ag = a1 * state.y_ag + a2 * state.y + a3 * state.y_snap
    state.lam = lambda_update(state, sched, p)
    state.lam_ag = a1 * state.lam_ag + a2 * state.lam + a3 * state.lam_snap
    state.t += 1

    if on_step is not None:
        on_step(
            StepRecord(
                s=sched.s, t=state.t, sample=i,
                x_prev=x_prev, y_prev=y_prev, lam_prev=lam_prev,
                v=state.v, x=state.x, y=state.y, lam=state.lam,
                theta=sched.theta, rho=sched.rho, eta=sched.eta, chi=sched.chi,
            )
        )
    return i


def outer_step(
    state: SolverState,
    sched: WeightSchedule,
    p: Problem,
    recorder: TraceRecorder,
    factor: Optional[SpdFactorization] = None,
    on_step: Optional[StepCallback] = None,
) -> None:
    """
    Runs outer iteration `sched.s` in place.

    Iterates and aggregates carry over from the previous outer iteration. The
    snapshot gradient is taken first; after the inner loop the snapshot triple
    becomes the mean of the m aggregate iterates, summed in t order.
    """
    state.s = sched.s
    state.t = 0
    take_snapshot(state, p, recorder)
    recorder.record(state.x_ag, state.y_ag, sched.s, 0)

    acc_x = np.zeros_like(state.x)
    acc_y = np.zeros_like(state.y)
    acc_lam = np.zeros_like(state.lam)
    for _ in range(sched.m):
        inner_step(state, sched, p, factor, on_step)
        acc_x += state.x_ag
        acc_y += state.y_ag
        acc_lam += state.lam_ag
        recorder.charge_stochastic()
        check_finite(sched.s, state.t, state.x, state.y, state.lam)
        if recorder.due(state.t):
            recorder.record(state.x_ag, state.y_ag, sched.s, state.t)

    state.x_snap = acc_x / sched.m
    state.y_snap = acc_y / sched.m
    state.lam_snap = acc_lam / sched.m


def output_point(
    state: SolverState,
    final: WeightSchedule,
    weighting: OutputWeighting = OutputWeighting.ALGORITHM,
) -> Tuple[DenseVector, DenseVector, DenseVector]:
    """
    Combines the last aggregate triple with the last snapshot triple.

    ALGORITHM weights the aggregate by 1/(1 + alpha_3 m) and the snapshot by
    alpha_3 m/(1 + alpha_3 m); APPENDIX uses alpha_1/(alpha_1 + alpha_3 m) and
    alpha_3 m/(alpha_1 + alpha_3 m). Both use the weights of s = N+1.
    """
    a3m = final.alpha3 * final.m
    if weighting == OutputWeighting.APPENDIX:
        denom = final.alpha1 + a3m
        if denom == 0.0:
            w_ag, w_snap = 1.0, 0.0
        else:
            w_ag, w_snap = final.alpha1 / denom, a3m / denom
    else:
        w_ag, w_snap = 1.0 / (1.0 + a3m), a3m / (1.0 + a3m)
    return (
        w_ag * state.x_ag + w_snap * state.x_snap,
        w_ag * state.y_ag + w_snap * state.y_snap,
        w_ag * state.lam_ag + w_snap * state.lam_snap,
    )


def run_asvrg_admm(
    p: Problem,
    config: Optional[SolverConfig] = None,
    seed: int = 0,
    on_step: Optional[StepCallback] = None,
    schedule: Optional[Iterable[WeightSchedule]] = None,
    name: str = SolverKind.ASVRG_ADMM.value,
) -> SolverOutput:
    """
    Runs the accelerated method for N outer iterations of m inner steps.

    Args:
        p (Problem): Instance to solve.
        config (SolverConfig, optional): Budget, chi and schedule parameters.
        seed (int): Seed of the sampling stream.
        on_step (StepCallback, optional): Receives every inner step.
        schedule (Iterable[WeightSchedule], optional): Replaces the default
            schedule; must yield at least N+1 entries.
        name (str): Solver id in the trace.

    Returns:
        SolverOutput: The weighted output triple and its trace.

    Raises:
        DivergenceError: On a non-finite iterate or a runaway objective.
        UnsupportedSizeError: If chi = 0 and A^T A is too large to factor.
    """
    config = config or SolverConfig()
    n_outer, m = resolve_budget(config, p.n)
    x0, y0, lam0 = feasible_start(p)
    state = SolverState.initial(x0, y0, lam0, make_rng(seed))
    recorder = TraceRecorder(p, name, seed, m)
    recorder.record(state.x_ag, state.y_ag)

    if n_outer == 0:
        logger.info(f"{name}: N=0, returning the initial point")
        return SolverOutput(x=x0, y=y0, lam=lam0, trace=recorder.records, seed=seed)

    source = schedule if schedule is not None else make_schedule(p, config, n_outer, m)
    schedules: List[WeightSchedule] = []
    for sched in source:
        schedules.append(sched)
        if len(schedules) == n_outer + 1:
            break
    if len(schedules) < n_outer + 1:
        raise ValueError(f"schedule yielded {len(schedules)} entries, need N+1 = {n_outer + 1}")
    factor = build_factor(p, schedules[0])

    logger.info(f"{name}: n={p.n}, d={p.d}, N={n_outer}, m={m}, chi={schedules[0].chi}, seed={seed}")
    start = time.perf_counter()
    for sched in schedules[:n_outer]:
        if factor is not None and factor.lbar != sched.lbar:
            factor = build_factor(p, sched)
        outer_step(state, sched, p, recorder, factor, on_step)
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug(
                f"{name}: s={sched.s} passes={recorder.passes:.3f} "
                f"objective={objective(p, state.x_ag, state.y_ag):.10g}"
            )
    recorder.record(state.x_ag, state.y_ag, n_outer, m)

    x_hat, y_hat, lam_hat = output_point(state, schedules[n_outer], config.output_weighting)
    logger.info(
        f"{name}: finished {recorder.passes:.2f} passes in {time.perf_counter() - start:.2f}s, "
        f"objective={objective(p, x_hat, y_hat):.10g}"
    )
    return SolverOutput(x=x_hat, y=y_hat, lam=lam_hat, trace=recorder.records, seed=seed)


class AsvrgAdmmSolver(BaseSolver):
    """The accelerated method as a pluggable solver."""

    @property
    def default_name(self) -> str:
        return SolverKind.ASVRG_ADMM.value

    def run(self, problem: Problem, seed: int = 0, on_step: Optional[StepCallback] = None) -> SolverOutput:
        return run_asvrg_admm(problem, self.config, seed, on_step=on_step, name=self.name)
