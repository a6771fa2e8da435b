"""Baseline ADMM solvers: SVRG-ADMM, stochastic ADMM and deterministic ADMM.

All three reuse the step functions of `updates.py` with a constant penalty
beta (theta = rho = beta) and differ only in the gradient fed to the x-step.
"""

import dataclasses
import math
from typing import Optional

import numpy as np

from src.config import SolverKind
from src.exceptions import UnsupportedProblemError
from src.problem.model import Problem, component_gradient, full_gradient, objective
from src.solvers.asvrg import build_factor, resolve_budget, take_snapshot
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
from src.solvers.schedule import WeightSchedule, pinned_schedule
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


def default_svrg_eta(p: Problem, config: SolverConfig) -> float:
    """
    eta = 4 L_Q + chi * beta * ||A||^2 unless configured.

    4 L_Q is the smallest proximal weight for which the SVRG-ADMM step 1/eta
    stays within 1/(4 L_Q); the second term absorbs the linearized penalty.
    """
    if config.eta is not None:
        return config.eta
    return 4.0 * p.l_q + config.chi * config.beta * p.a_norm_sq


def default_sadmm_eta0(p: Problem, config: SolverConfig) -> float:
    """eta_0 = L_Q + beta * ||A||^2 unless configured."""
    if config.eta0 is not None:
        return config.eta0
    return p.l_q + config.beta * p.a_norm_sq


def default_admm_eta(p: Problem, config: SolverConfig) -> float:
    """eta = L_f + beta * ||A||^2 unless configured."""
    if config.eta is not None:
        return config.eta
    return p.l_f + config.beta * p.a_norm_sq


def _linearized_step(state: SolverState, sched: WeightSchedule, p: Problem) -> None:
    state.x = x_update_linearized(state, sched, p)
    state.y = y_update(state, sched, p)
    state.lam = lambda_update(state, sched, p)
    state.t += 1


def _constant_schedule(beta: float, eta: float) -> WeightSchedule:
    return next(pinned_schedule(beta, eta, chi=1, n_outer=1, m=1))


def run_svrg_admm(
    p: Problem,
    config: Optional[SolverConfig] = None,
    seed: int = 0,
    on_step: Optional[StepCallback] = None,
    name: str = SolverKind.SVRG_ADMM.value,
) -> SolverOutput:
    """
    Non-accelerated variance-reduced ADMM with constant theta = rho = beta.

    Draws samples, sums snapshot means and charges passes in the same order
    as the accelerated method, so running that method on `pinned_schedule`
    with the same seed reproduces this trajectory bitwise. Returns the last
    iterate.
    """
    config = config or SolverConfig()
    n_outer, m = resolve_budget(config, p.n)
    x0, y0, lam0 = feasible_start(p)
    state = SolverState.initial(x0, y0, lam0, make_rng(seed))
    recorder = TraceRecorder(p, name, seed, m)
    recorder.record(state.x, state.y)
    if n_outer == 0:
        return SolverOutput(x=x0, y=y0, lam=lam0, trace=recorder.records, seed=seed)

    eta = default_svrg_eta(p, config)
    sched = next(pinned_schedule(config.beta, eta, config.chi, n_outer, m))
    factor = build_factor(p, sched)
    logger.info(f"{name}: n={p.n}, d={p.d}, N={n_outer}, m={m}, beta={config.beta}, eta={eta:.6g}, seed={seed}")

    for s in range(1, n_outer + 1):
        state.s = s
        state.t = 0
        take_snapshot(state, p, recorder)
        recorder.record(state.x, state.y, s, 0)
        acc_x = np.zeros_like(state.x)
        acc_y = np.zeros_like(state.y)
        acc_lam = np.zeros_like(state.lam)
        for _ in range(m):
            i = draw_sample(state.rng, p.n)
            state.v = svrg_gradient(p, i, state.x, state.x_snap, state.v_snap)
            x_prev, y_prev, lam_prev = state.x, state.y, state.lam
            if sched.chi == 1:
                state.x = x_update_linearized(state, sched, p)
            else:
                state.x = x_update_exact(state, sched, p, factor)
            state.y = y_update(state, sched, p)
            state.lam = lambda_update(state, sched, p)
            state.t += 1
            if on_step is not None:
                on_step(
                    StepRecord(
                        s=s, t=state.t, sample=i,
                        x_prev=x_prev, y_prev=y_prev, lam_prev=lam_prev,
                        v=state.v, x=state.x, y=state.y, lam=state.lam,
                        theta=sched.theta, rho=sched.rho, eta=sched.eta, chi=sched.chi,
                    )
                )
            acc_x += state.x
            acc_y += state.y
            acc_lam += state.lam
            recorder.charge_stochastic()
            check_finite(s, state.t, state.x, state.y, state.lam)
            if recorder.due(state.t):
                recorder.record(state.x, state.y, s, state.t)
        state.x_snap = acc_x / m
        state.y_snap = acc_y / m
        state.lam_snap = acc_lam / m

    recorder.record(state.x, state.y, n_outer, m)
    logger.info(f"{name}: finished {recorder.passes:.2f} passes, objective={objective(p, state.x, state.y):.10g}")
    return SolverOutput(x=state.x, y=state.y, lam=state.lam, trace=recorder.records, seed=seed)


def run_sadmm(
    p: Problem,
    config: Optional[SolverConfig] = None,
    seed: int = 0,
    name: str = SolverKind.SADMM.value,
) -> SolverOutput:
    """
    Stochastic ADMM: one raw component gradient per step, no variance reduction.

    The proximal weight grows as eta_t = eta_0 * sqrt(t) for t = 1, 2, ...
    unless `step_decay` is off. Runs `iterations` steps, or max_passes * n
    steps when unset.

    Raises:
        UnsupportedProblemError: If chi = 0 (eta_t changes every step, so there
            is no single matrix to factor).
    """
    config = config or SolverConfig()
    if config.chi != 1:
        raise UnsupportedProblemError("SADMM supports only the linearized x-update, configure chi=1")
    steps = config.iterations if config.iterations is not None else math.floor(config.max_passes * p.n)
    eta0 = default_sadmm_eta0(p, config)
    base = _constant_schedule(config.beta, eta0)

    x0, y0, lam0 = feasible_start(p)
    state = SolverState.initial(x0, y0, lam0, make_rng(seed))
    recorder = TraceRecorder(p, name, seed, p.n)
    recorder.record(state.x, state.y)
    logger.info(f"{name}: n={p.n}, d={p.d}, steps={steps}, eta0={eta0:.6g}, decay={config.step_decay}, seed={seed}")

    for t in range(1, steps + 1):
        i = draw_sample(state.rng, p.n)
        state.v = component_gradient(p, i, state.x)
        sched = dataclasses.replace(base, eta=eta0 * math.sqrt(t)) if config.step_decay else base
        _linearized_step(state, sched, p)
        recorder.charge_stochastic()
        check_finite(0, t, state.x, state.y, state.lam)
        if recorder.due(t):
            recorder.record(state.x, state.y, 0, t)

    recorder.record(state.x, state.y, 0, steps)
    logger.info(f"{name}: finished {recorder.passes:.2f} passes, objective={objective(p, state.x, state.y):.10g}")
    return SolverOutput(x=state.x, y=state.y, lam=state.lam, trace=recorder.records, seed=seed)


def run_deterministic_admm(
    p: Problem,
    config: Optional[SolverConfig] = None,
    name: str = SolverKind.ADMM.value,
) -> SolverOutput:
    """
    Deterministic linearized ADMM with the full gradient, used as the reference.

    Each iteration costs one effective pass. Runs `iterations` iterations, or
    floor(max_passes) when unset.
    """
    config = config or SolverConfig()
    iterations = config.iterations if config.iterations is not None else max(1, math.floor(config.max_passes))
    eta = default_admm_eta(p, config)
    sched = _constant_schedule(config.beta, eta)

    x0, y0, lam0 = feasible_start(p)
    state = SolverState.initial(x0, y0, lam0, make_rng(0))
    recorder = TraceRecorder(p, name, 0, 1)
    recorder.record(state.x, state.y)
    logger.info(f"{name}: n={p.n}, d={p.d}, iterations={iterations}, beta={config.beta}, eta={eta:.6g}")

    for t in range(1, iterations + 1):
        state.v = full_gradient(p, state.x)
        _linearized_step(state, sched, p)
        recorder.charge_full()
        check_finite(0, t, state.x, state.y, state.lam)
        recorder.record(state.x, state.y, 0, t)

    logger.info(f"{name}: finished {iterations} iterations, objective={objective(p, state.x, state.y):.10g}")
    return SolverOutput(x=state.x, y=state.y, lam=state.lam, trace=recorder.records, seed=0)


class SvrgAdmmSolver(BaseSolver):
    @property
    def default_name(self) -> str:
        return SolverKind.SVRG_ADMM.value

    def run(self, problem: Problem, seed: int = 0, on_step: Optional[StepCallback] = None) -> SolverOutput:
        return run_svrg_admm(problem, self.config, seed, on_step=on_step, name=self.name)


class SadmmSolver(BaseSolver):
    @property
    def default_name(self) -> str:
        return SolverKind.SADMM.value

    def run(self, problem: Problem, seed: int = 0, on_step: Optional[StepCallback] = None) -> SolverOutput:
        return run_sadmm(problem, self.config, seed, name=self.name)


class DeterministicAdmmSolver(BaseSolver):
    """Seed-independent reference solver; the seed is only echoed into the trace."""

    @property
    def default_name(self) -> str:
        return SolverKind.ADMM.value

    def run(self, problem: Problem, seed: int = 0, on_step: Optional[StepCallback] = None) -> SolverOutput:
        output = run_deterministic_admm(problem, self.config, name=self.name)
        trace = [record.model_copy(update={"seed": seed}) for record in output.trace]
        return SolverOutput(x=output.x, y=output.y, lam=output.lam, trace=trace, seed=seed)
