"""Executable checks of the method's analytic properties.

Every check is deterministic given its inputs, never raises on a violated
property, and returns a `CheckReport` whose margin is the worst-case slack.
Failed reports carry a witness that `replay_witness` turns back into the same
check on the same inputs.
"""

from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from src.config import settings
from src.linalg import DenseVector, matvec, matvec_transpose
from src.problem.model import Problem, full_gradient, loss_value
from src.solvers.asvrg import resolve_budget, run_asvrg_admm
from src.solvers.base import SolverConfig, StepRecord
from src.solvers.baselines import default_svrg_eta, run_svrg_admm
from src.solvers.schedule import (
    SIMPLEX_TOL,
    advance_weights,
    default_penalties,
    make_schedule,
    pinned_schedule,
)
from src.solvers.updates import svrg_gradient
from src.verify.oracles import transcribe_algorithm
from src.verify.report import CheckReport, from_list, to_list

AdvanceFn = Callable[[float, float, float], Tuple[float, float, float]]

INITIAL_WEIGHTS = (7.0 / 30.0, 2.0 / 3.0, 0.1)
FD_TOL = 1e-5
UNBIASED_TOL = 1e-12
TRANSCRIPTION_TOL = 1e-12


def _slacked(bound: float) -> float:
    return bound * (1.0 + settings.check_slack) + settings.check_floor


def corrupt_advance_weights(alpha1: float, alpha2: float, alpha3: float) -> Tuple[float, float, float]:
    """Negative control: leaves the weights unchanged, breaking every monotonicity."""
    return alpha1, alpha2, alpha3


def check_schedule_properties(n_outer: int, advance: Optional[AdvanceFn] = None) -> CheckReport:
    """
    Iterates the weight recursion N steps from (7/30, 2/3, 1/10).

    Checks the simplex sum, membership in (0, 1), strict monotonicity of all
    three weights, alpha_{2,s} <= 2/(s+2), and theta_s >= 1 >= rho_s for
    s <= N under the default penalties.
    """
    if n_outer < 1:
        raise ValueError(f"N must be >= 1, got {n_outer}")
    corrupt = advance is corrupt_advance_weights
    advance = advance or advance_weights
    weights = [INITIAL_WEIGHTS]
    for _ in range(n_outer):
        weights.append(advance(*weights[-1]))
    beta1, beta2 = default_penalties(n_outer, weights[n_outer - 1][1])

    tightest = (np.inf, 1, "none")
    violation = None
    for s, (a1, a2, a3) in enumerate(weights, start=1):
        cases = [
            ("simplex", SIMPLEX_TOL - abs(a1 + a2 + a3 - 1.0), False),
            ("open_interval", min(a1, a2, a3, 1.0 - a1, 1.0 - a2, 1.0 - a3), True),
            ("alpha2_bound", 2.0 / (s + 2) - a2, False),
        ]
        if s > 1:
            p1, p2, p3 = weights[s - 2]
            cases += [
                ("alpha1_decreasing", p1 - a1, True),
                ("alpha2_decreasing", p2 - a2, True),
                ("alpha3_increasing", a3 - p3, True),
            ]
        if s <= n_outer:
            cases += [
                ("theta_ge_one", beta1 * a2 - 1.0 + SIMPLEX_TOL, False),
                ("rho_le_one", 1.0 - beta2 / a2 + SIMPLEX_TOL, False),
            ]
        for name, margin, strict in cases:
            violated = margin <= 0.0 if strict else margin < 0.0
            if violated and (violation is None or margin < violation[0]):
                violation = (margin, s, name)
            if margin < tightest[0]:
                tightest = (margin, s, name)

    failed = violation is not None
    margin, s, name = violation if failed else tightest
    witness = None
    if failed:
        a1, a2, a3 = weights[s - 1]
        witness = {"n_outer": n_outer, "s": s, "violated": name, "alphas": [a1, a2, a3], "corrupt": corrupt}
    return CheckReport(
        name="schedule_properties",
        passed=not failed,
        margin=float(margin),
        witness=witness,
        detail=f"N={n_outer}, tightest={name} at s={s}",
    )


def _enumerate_v(p: Problem, x_md: DenseVector, x_snap: DenseVector) -> np.ndarray:
    v_snap = full_gradient(p, x_snap)
    return np.stack([svrg_gradient(p, i, x_md, x_snap, v_snap) for i in range(p.n)])


def check_unbiasedness(p: Problem, states: Sequence[Tuple[DenseVector, DenseVector]]) -> CheckReport:
    """The mean of v over all n samples equals grad f(x_md) to 1e-12 relative."""
    if not states:
        raise ValueError("states must be nonempty")
    worst_margin, worst_state = np.inf, None
    for x_md, x_snap in states:
        v_all = _enumerate_v(p, x_md, x_snap)
        g = full_gradient(p, x_md)
        scale = max(np.linalg.norm(g), np.linalg.norm(full_gradient(p, x_snap)), settings.check_floor)
        rel = np.linalg.norm(v_all.mean(axis=0) - g) / scale
        margin = UNBIASED_TOL - rel
        if margin < worst_margin:
            worst_margin, worst_state = margin, (x_md, x_snap)
    passed = worst_margin >= 0.0
    return CheckReport(
        name="unbiasedness",
        passed=passed,
        margin=float(worst_margin),
        witness=None if passed else {"x_md": to_list(worst_state[0]), "x_snap": to_list(worst_state[1])},
        detail=f"{len(states)} states",
    )


def check_variance_bound(p: Problem, states: Sequence[Tuple[DenseVector, DenseVector]]) -> CheckReport:
    """
    Exact variance of v against its smoothness bound, state by state:

        (1/n) sum_i ||v_i - grad f(x_md)||^2
            <= 2 L_Q (f(x_snap) - f(x_md) - <grad f(x_md), x_snap - x_md>)

    with multiplicative slack `settings.check_slack` and absolute floor
    `settings.check_floor`.
    """
    if not states:
        raise ValueError("states must be nonempty")
    worst_margin, worst_state = np.inf, None
    for x_md, x_snap in states:
        v_all = _enumerate_v(p, x_md, x_snap)
        g = full_gradient(p, x_md)
        variance = float(np.mean(np.sum((v_all - g) ** 2, axis=1)))
        bregman = loss_value(p, x_snap) - loss_value(p, x_md) - float(g @ (x_snap - x_md))
        bound = 2.0 * p.l_q * bregman
        margin = _slacked(bound) - variance
        if margin < worst_margin:
            worst_margin, worst_state = margin, (x_md, x_snap)
    passed = worst_margin >= 0.0
    return CheckReport(
        name="variance_bound",
        passed=passed,
        margin=float(worst_margin),
        witness=None if passed else {"x_md": to_list(worst_state[0]), "x_snap": to_list(worst_state[1])},
        detail=f"{len(states)} states, L_Q={p.l_q:.6g}",
    )


def check_gradient_fd(p: Problem, points: int = 20, h: float = 1e-5, seed: int = 0) -> CheckReport:
    """
    Central differences of f against `full_gradient` (1e-5 relative) at random
    points, and the L_f quadratic upper bound between consecutive points.
    """
    if h <= 0:
        raise ValueError(f"h must be positive, got {h}")
    rng = np.random.default_rng(seed)
    xs = [rng.standard_normal(p.d) / np.sqrt(p.d) for _ in range(max(points, 1))]
    return _gradient_cases(p, xs, h)


def _gradient_cases(p: Problem, xs: List[DenseVector], h: float) -> CheckReport:
    worst_margin, worst_witness = np.inf, None
    eye = np.eye(p.d)
    for k, x in enumerate(xs):
        g = full_gradient(p, x)
        fd = np.array([(loss_value(p, x + h * e) - loss_value(p, x - h * e)) / (2.0 * h) for e in eye])
        rel = np.linalg.norm(fd - g) / max(np.linalg.norm(g), settings.check_floor)
        margin = FD_TOL - rel
        if margin < worst_margin:
            worst_margin, worst_witness = margin, {"points": [to_list(x)], "h": h}
        if k + 1 < len(xs):
            y = xs[k + 1]
            gap = loss_value(p, y) - loss_value(p, x) - float(g @ (y - x))
            bound = 0.5 * p.l_f * float((y - x) @ (y - x))
            margin = _slacked(bound) - gap
            if margin < worst_margin:
                worst_margin, worst_witness = margin, {"points": [to_list(x), to_list(y)], "h": h}
    passed = worst_margin >= 0.0
    return CheckReport(
        name="gradient_fd",
        passed=passed,
        margin=float(worst_margin),
        witness=None if passed else worst_witness,
        detail=f"{len(xs)} points, h={h:g}",
    )


def _x_residual(p: Problem, rec: StepRecord) -> Tuple[float, float]:
    r_prev = matvec(p.A, rec.x_prev) + matvec(p.B, rec.y_prev) - p.c
    r_mixed = matvec(p.A, rec.x) + matvec(p.B, rec.y_prev) - p.c
    penalty = matvec_transpose(p.A, r_prev if rec.chi == 1 else r_mixed)
    dual = matvec_transpose(p.A, rec.lam_prev)
    step = rec.eta * (rec.x - rec.x_prev)
    residual = rec.v + rec.theta * penalty + dual + step
    scale = (
        np.linalg.norm(rec.v) + rec.theta * np.linalg.norm(penalty) + np.linalg.norm(dual)
        + rec.eta * (np.linalg.norm(rec.x) + np.linalg.norm(rec.x_prev))
    )
    return float(np.linalg.norm(residual)), float(max(scale, settings.check_floor))


def _y_margin(p: Problem, rec: StepRecord) -> float:
    """Smallest per-coordinate slack of lam_prev + theta r in nu * d|y| (B = -I)."""
    ax = matvec(p.A, rec.x)
    r = ax + matvec(p.B, rec.y) - p.c
    g = rec.lam_prev + rec.theta * r
    residual = np.where(rec.y != 0.0, np.abs(g - p.nu * np.sign(rec.y)), np.maximum(np.abs(g) - p.nu, 0.0))
    scale = p.nu + np.abs(rec.lam_prev) + rec.theta * (np.abs(ax) + np.abs(p.c) + np.abs(rec.y))
    tol = settings.check_floor + settings.check_slack * scale
    return float(np.min(tol - residual)) if residual.size else np.inf


def check_subproblem_optimality(p: Problem, records: Sequence[StepRecord]) -> CheckReport:
    """
    Re-evaluates the x-step stationarity identity

        v + chi theta A^T (A x_prev + B y_prev - c) + (1 - chi) theta A^T (A x + B y_prev - c)
          + A^T lam_prev + eta (x - x_prev) = 0

    to `settings.solve_residual_tol` relative, and the y-step inclusion
    lam_prev + theta (A x + B y - c) in nu * d||y||_1 coordinate-wise.
    """
    if not records:
        raise ValueError("records must be nonempty")
    worst_margin, worst_rec, max_x, max_y = np.inf, None, 0.0, 0.0
    for rec in records:
        res, scale = _x_residual(p, rec)
        margin = settings.solve_residual_tol - res / scale
        max_x = max(max_x, res / scale)
        if p.b_is_negative_identity:
            y_margin = _y_margin(p, rec)
            max_y = max(max_y, -min(y_margin, 0.0))
            margin = min(margin, y_margin)
        if margin < worst_margin:
            worst_margin, worst_rec = margin, rec
    passed = worst_margin >= 0.0
    return CheckReport(
        name="subproblem_optimality",
        passed=passed,
        margin=float(worst_margin),
        witness=None if passed else step_to_witness(worst_rec),
        detail=f"{len(records)} steps, max x-residual={max_x:.3e}, max y-excess={max_y:.3e}",
    )


def step_to_witness(rec: StepRecord) -> dict:
    out = {}
    for key, value in vars(rec).items():
        out[key] = to_list(value) if isinstance(value, np.ndarray) else value
    return out


def step_from_witness(witness: dict) -> StepRecord:
    fields = {k: (from_list(v) if isinstance(v, list) else v) for k, v in witness.items()}
    return StepRecord(**fields)


def _trace_key(trace) -> List[Tuple[float, float, float]]:
    return [(r.passes, r.objective, r.violation) for r in trace]


def check_reduction_equivalence(
    p: Problem,
    seed: int = 0,
    passes: float = 5.0,
    outer_steps: int = 50,
    chi: int = 1,
) -> CheckReport:
    """
    Two reductions of the accelerated method.

    1. With `pinned_schedule` it must reproduce standalone SVRG-ADMM bitwise
       (trace and final point) under the same seed; a second seed must differ.
    2. With m = 1 on the first sample alone it must match the dense
       deterministic accelerated transcription to 1e-12 relative.
    """
    failures = []
    margins = []

    config = SolverConfig(max_passes=passes, chi=chi)
    n_outer, m = resolve_budget(config, p.n)
    standalone = run_svrg_admm(p, config, seed)
    eta = default_svrg_eta(p, config)
    pinned = run_asvrg_admm(
        p, config, seed,
        schedule=pinned_schedule(config.beta, eta, config.chi, n_outer, m),
        name=standalone.trace[0].solver,
    )
    identical = _trace_key(standalone.trace) == _trace_key(pinned.trace) and all(
        np.array_equal(a, b) for a, b in ((standalone.x, pinned.x), (standalone.y, pinned.y), (standalone.lam, pinned.lam))
    )
    margins.append(0.0 if identical else -1.0)
    if not identical:
        failures.append("pinned")

    if p.n > 1:
        other = run_svrg_admm(p, config, seed + 1)
        differs = _trace_key(other.trace) != _trace_key(standalone.trace)
        margins.append(0.0 if differs else -1.0)
        if not differs:
            failures.append("seeds")

    single = p.subset([0])
    single_config = SolverConfig(n_outer=outer_steps, inner=1, chi=chi)
    schedules = list(make_schedule(single, single_config, outer_steps, 1))
    steps: List[StepRecord] = []
    out = run_asvrg_admm(single, single_config, seed, on_step=steps.append, schedule=schedules)
    oracle = transcribe_algorithm(single, schedules, seed, variance_reduction=False)
    worst = 0.0
    pairs = [(rec.x, ox) for rec, ox in zip(steps, oracle.x_steps)]
    pairs += [(rec.y, oy) for rec, oy in zip(steps, oracle.y_steps)]
    pairs += [(rec.lam, ol) for rec, ol in zip(steps, oracle.lam_steps)]
    pairs += list(zip((out.x, out.y, out.lam), oracle.output))
    for ours, theirs in pairs:
        worst = max(worst, float(np.max(np.abs(ours - theirs))) / max(1.0, float(np.max(np.abs(theirs)))))
    if len(steps) != len(oracle.x_steps):
        worst = np.inf
    margins.append(TRANSCRIPTION_TOL - worst)
    if worst > TRANSCRIPTION_TOL:
        failures.append("single_sample")

    passed = not failures
    return CheckReport(
        name="reduction_equivalence",
        passed=passed,
        margin=float(min(margins)),
        witness=None if passed else {
            "seed": seed, "passes": passes, "outer_steps": outer_steps, "chi": chi, "failed": failures,
        },
        detail=f"pinned={'identical' if 'pinned' not in failures else 'differs'}, single-sample deviation={worst:.3e}",
    )


def replay_witness(report: CheckReport, problem: Optional[Problem] = None) -> CheckReport:
    """
    Re-runs a failed check on the inputs stored in its witness.

    Raises:
        ValueError: If the report has no witness, names an unknown check, or
            needs a problem and none is given.
    """
    if report.witness is None:
        raise ValueError(f"report {report.name!r} carries no witness")
    w = report.witness
    if report.name == "schedule_properties":
        return check_schedule_properties(w["n_outer"], corrupt_advance_weights if w.get("corrupt") else None)
    if problem is None:
        raise ValueError(f"replaying {report.name!r} needs the problem it ran on")
    if report.name == "variance_bound":
        return check_variance_bound(problem, [(from_list(w["x_md"]), from_list(w["x_snap"]))])
    if report.name == "unbiasedness":
        return check_unbiasedness(problem, [(from_list(w["x_md"]), from_list(w["x_snap"]))])
    if report.name == "gradient_fd":
        return _gradient_cases(problem, [from_list(x) for x in w["points"]], w["h"])
    if report.name == "subproblem_optimality":
        return check_subproblem_optimality(problem, [step_from_witness(w)])
    if report.name == "reduction_equivalence":
        return check_reduction_equivalence(problem, w["seed"], w["passes"], w["outer_steps"], w["chi"])
    raise ValueError(f"unknown check {report.name!r}")
