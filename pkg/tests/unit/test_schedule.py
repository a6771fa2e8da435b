"""Unit tests for the weight and penalty schedules."""

import pytest

from src.config import LbarRule
from src.exceptions import ScheduleError
from src.ingestion import desk_problem
from src.solvers import SolverConfig, advance_weights, make_schedule, pinned_schedule
from src.solvers.schedule import default_penalties, lbar_constant


@pytest.mark.unit
class TestAdvanceWeights:
    """Tests for the alpha recursion."""

    def test_first_step_value(self):
        _, alpha2, _ = advance_weights(7.0 / 30.0, 2.0 / 3.0, 0.1)

        assert alpha2 == pytest.approx(0.480506, abs=1e-6)
        assert alpha2 < 0.5

    @pytest.mark.parametrize("start", [(7.0 / 30.0, 2.0 / 3.0, 0.1), (0.5, 0.3, 0.2), (0.01, 0.01, 0.98)])
    def test_stays_on_simplex(self, start):
        alphas = advance_weights(*start)

        assert sum(alphas) == pytest.approx(1.0, abs=1e-12)
        assert all(0.0 < a < 1.0 for a in alphas)

    def test_long_run_bound_and_monotonicity(self):
        """
        Iterate 1000 steps from alpha_2 = 2/3.

        Verifies:
            - alpha_{2,s} <= 2/(s+2) for every s.
            - alpha_1 and alpha_2 decrease while alpha_3 increases.
        """
        alphas = (7.0 / 30.0, 2.0 / 3.0, 0.1)
        for s in range(1, 1001):
            assert alphas[1] <= 2.0 / (s + 2) + 1e-15
            nxt = advance_weights(*alphas)
            assert nxt[0] < alphas[0]
            assert nxt[1] < alphas[1]
            assert nxt[2] > alphas[2]
            alphas = nxt

    @pytest.mark.parametrize("bad", [(0.0, 0.5, 0.5), (0.5, 0.5, 0.1), (-0.1, 0.6, 0.5), (0.2, 1.0, -0.2)])
    def test_rejects_invalid_weights(self, bad):
        with pytest.raises(ScheduleError):
            advance_weights(*bad)


@pytest.mark.unit
class TestMakeSchedule:
    """Tests for make_schedule and its defaults."""

    def test_defaults_for_ten_outer_iterations(self):
        p = desk_problem(n=40, d=6, seed=0)

        schedules = list(make_schedule(p, SolverConfig(), n_outer=10, m=40))

        first = schedules[0]
        assert len(schedules) == 11
        assert first.beta1 == 10.0
        assert first.beta2 == pytest.approx(0.1)
        assert first.theta == pytest.approx(20.0 / 3.0)
        assert first.rho == pytest.approx(0.15)
        assert [sched.s for sched in schedules] == list(range(1, 12))

    def test_eta_includes_penalty_only_when_linearized(self):
        p = desk_problem(n=40, d=6, seed=0)
        lbar = lbar_constant(p, 0.1)

        linear = next(make_schedule(p, SolverConfig(chi=1), n_outer=5, m=10))
        exact = next(make_schedule(p, SolverConfig(chi=0), n_outer=5, m=10))

        assert exact.eta == pytest.approx(lbar * 2.0 / 3.0)
        assert linear.eta == pytest.approx((lbar + 5.0 * p.a_norm_sq) * 2.0 / 3.0)
        assert lbar == pytest.approx(p.l_q / 0.1 + p.l_f)

    @pytest.mark.parametrize("chi", [0, 1])
    def test_per_outer_lbar_follows_alpha3(self, chi):
        """
        Verify the per-outer rule recomputes lbar from the current alpha_3.

        Verifies:
            - lbar_s = L_Q / alpha_{3,s} + L_f and the first entry equals the global value.
            - lbar_s never increases, since alpha_3 grows.
            - eta_s = (lbar_s + chi beta1 ||A||^2) alpha_{2,s}.
        """
        p = desk_problem(n=40, d=6, seed=0)
        config = SolverConfig(chi=chi, lbar_rule=LbarRule.PER_OUTER)

        schedules = list(make_schedule(p, config, n_outer=10, m=40))

        assert schedules[0].lbar == pytest.approx(lbar_constant(p, 0.1))
        for sched in schedules:
            assert sched.lbar == pytest.approx(lbar_constant(p, sched.alpha3))
            assert sched.eta == pytest.approx((sched.lbar + chi * sched.beta1 * p.a_norm_sq) * sched.alpha2)
        for earlier, later in zip(schedules, schedules[1:]):
            assert later.lbar <= earlier.lbar
        assert schedules[-1].lbar < schedules[0].lbar

    def test_global_lbar_is_constant(self):
        p = desk_problem(n=40, d=6, seed=0)

        schedules = list(make_schedule(p, SolverConfig(), n_outer=10, m=40))

        assert {sched.lbar for sched in schedules} == {lbar_constant(p, 0.1)}

    @pytest.mark.parametrize("n_outer", [1, 2, 3, 10, 50])
    def test_theta_dominates_rho(self, n_outer):
        """
        Verify theta_s >= rho_s for every s, including very short runs.

        For N <= 2 the (N, 1/N) penalties would give theta_N < rho_N, so the
        defaults switch to (1/alpha_{2,N}, alpha_{2,N}).
        """
        p = desk_problem(n=20, d=4, seed=1)

        for sched in list(make_schedule(p, SolverConfig(), n_outer, m=5))[:n_outer]:
            assert sched.theta >= sched.rho * (1 - 1e-12)

    def test_short_run_penalties(self):
        beta1, beta2 = default_penalties(1, 2.0 / 3.0)

        assert beta1 == pytest.approx(1.5)
        assert beta2 == pytest.approx(2.0 / 3.0)
        assert default_penalties(10, 0.15) == (10.0, 0.1)

    def test_explicit_penalties_override(self):
        p = desk_problem(n=20, d=4, seed=1)

        first = next(make_schedule(p, SolverConfig(beta1=3.0, beta2=0.5), n_outer=4, m=5))

        assert first.theta == pytest.approx(2.0)
        assert first.rho == pytest.approx(0.75)

    @pytest.mark.parametrize(
        "kwargs, n_outer, m",
        [({}, 0, 5), ({}, 3, 0), ({"alpha2_init": 0.7}, 3, 5), ({"alpha3_init": 0.4}, 3, 5)],
    )
    def test_invalid_arguments_fail_eagerly(self, kwargs, n_outer, m):
        """Validation happens at the call, not when the first entry is consumed."""
        p = desk_problem(n=20, d=4, seed=1)

        with pytest.raises(ScheduleError):
            make_schedule(p, SolverConfig(**kwargs), n_outer, m)


@pytest.mark.unit
class TestPinnedSchedule:
    def test_constant_entries(self):
        entries = list(pinned_schedule(beta=2.0, eta=7.0, chi=1, n_outer=3, m=4))

        assert len(entries) == 4
        for sched in entries:
            assert (sched.alpha1, sched.alpha2, sched.alpha3) == (0.0, 1.0, 0.0)
            assert sched.theta == sched.rho == 2.0
            assert sched.eta == sched.lbar == 7.0
            assert sched.beta1 == sched.beta2 == 2.0
