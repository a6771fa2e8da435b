"""Straight-line dense transcription of the accelerated method.

Shares no code with `src.solvers` beyond the schedule values and the sampling
stream: matrices are densified, every update is written out inline, and the
exact x-step uses a dense solve. Agreement with the solver package therefore
checks the update order, the aggregates, the snapshot averaging and the
output weighting independently.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.linalg import DenseVector
from src.problem.model import Problem
from src.solvers.base import make_rng
from src.solvers.schedule import WeightSchedule


@dataclass
class OracleRun:
    """Iterates after every inner step plus the weighted output triple."""
    x_steps: List[DenseVector] = field(default_factory=list)
    y_steps: List[DenseVector] = field(default_factory=list)
    lam_steps: List[DenseVector] = field(default_factory=list)
    output: Optional[Tuple[DenseVector, DenseVector, DenseVector]] = None


def transcribe_algorithm(
    p: Problem,
    schedules: Sequence[WeightSchedule],
    seed: int = 0,
    variance_reduction: bool = True,
) -> OracleRun:
    """
    Runs N = len(schedules) - 1 outer iterations densely.

    Args:
        p (Problem): Instance with B = -I.
        schedules (Sequence[WeightSchedule]): Entries for s = 1, ..., N+1.
        seed (int): Seed of the sampling stream (drawn even when unused).
        variance_reduction (bool): When False, v is the full gradient at the
            middle point (the deterministic accelerated method).
    """
    X = p.dataset.features.toarray()
    labels = p.dataset.labels
    A = p.A.toarray()
    B = p.B.toarray()
    c = p.c
    n, d = X.shape
    deriv = p.loss_impl.derivative

    def grad_i(i: int, x: DenseVector) -> DenseVector:
        return deriv(np.array([X[i] @ x]), labels[i:i + 1])[0] * X[i]

    def grad(x: DenseVector) -> DenseVector:
        return deriv(X @ x, labels) @ X / n

    rng = make_rng(seed)
    x = np.zeros(d)
    y = np.linalg.lstsq(B, c, rcond=None)[0]
    lam = np.zeros(c.shape[0])
    x_ag, y_ag, lam_ag = x.copy(), y.copy(), lam.copy()
    x_snap, y_snap, lam_snap = x.copy(), y.copy(), lam.copy()
    run = OracleRun()

    n_outer = len(schedules) - 1
    for sched in schedules[:n_outer]:
        a1, a2, a3 = sched.alpha1, sched.alpha2, sched.alpha3
        theta, rho, eta, m = sched.theta, sched.rho, sched.eta, sched.m
        v_snap = grad(x_snap)
        sum_x, sum_y, sum_lam = np.zeros(d), np.zeros_like(y), np.zeros_like(lam)
        for _ in range(m):
            x_md = a1 * x_ag + a2 * x + a3 * x_snap
            i = int(rng.integers(n))
            if variance_reduction:
                v = grad_i(i, x_md) - grad_i(i, x_snap) + v_snap
            else:
                v = grad(x_md)
            if sched.chi == 1:
                x = x - (A.T @ lam + v + theta * A.T @ (A @ x + B @ y - c)) / eta
            else:
                lhs = eta * np.eye(d) + theta * A.T @ A
                x = np.linalg.solve(lhs, eta * x - v - A.T @ lam - theta * A.T @ (B @ y - c))
            x_ag = a1 * x_ag + a2 * x + a3 * x_snap
            u = A @ x - c + lam / theta
            y = np.sign(u) * np.maximum(np.abs(u) - p.nu / theta, 0.0)
            y_ag = a1 * y_ag + a2 * y + a3 * y_snap
            lam = lam + rho * (A @ x + B @ y - c)
            lam_ag = a1 * lam_ag + a2 * lam + a3 * lam_snap
            sum_x, sum_y, sum_lam = sum_x + x_ag, sum_y + y_ag, sum_lam + lam_ag
            run.x_steps.append(x.copy())
            run.y_steps.append(y.copy())
            run.lam_steps.append(lam.copy())
        x_snap, y_snap, lam_snap = sum_x / m, sum_y / m, sum_lam / m

    final = schedules[n_outer]
    a3m = final.alpha3 * final.m
    w_ag, w_snap = 1.0 / (1.0 + a3m), a3m / (1.0 + a3m)
    run.output = (
        w_ag * x_ag + w_snap * x_snap,
        w_ag * y_ag + w_snap * y_snap,
        w_ag * lam_ag + w_snap * lam_snap,
    )
    return run
