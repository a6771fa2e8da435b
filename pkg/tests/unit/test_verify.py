"""Unit tests for the Verify layer.

Each check is exercised on a passing input and, where a failure can be
provoked cheaply, on a failing one whose witness must replay to the same
verdict.

Conventions:
    - Mocks: unittest.mock.patch
    - Framework: pytest
"""

import dataclasses
import io
from unittest.mock import patch

import numpy as np
import pytest
from pydantic import ValidationError

from src.config import LossKind
from src.ingestion import desk_problem
from src.linalg import as_csr
from src.problem import Dataset, Problem, full_gradient
from src.verify import (
    CheckReport,
    check_gradient_fd,
    check_reduction_equivalence,
    check_schedule_properties,
    check_subproblem_optimality,
    check_unbiasedness,
    check_variance_bound,
    format_reports,
    replay_witness,
    verify_suite,
)
from src.verify.checks import corrupt_advance_weights
from src.verify.suite import random_states, record_trajectory


@pytest.mark.unit
class TestCheckReport:
    def test_failed_report_requires_witness(self):
        with pytest.raises(ValidationError):
            CheckReport(name="x", passed=False, margin=-1.0)

    def test_summary_line(self):
        report = CheckReport(name="gradient_fd", passed=True, margin=1e-6, detail="20 points")

        assert report.summary() == "[PASS] gradient_fd: margin=1.000000e-06 20 points"

    def test_replay_without_witness_rejected(self):
        with pytest.raises(ValueError, match="no witness"):
            replay_witness(CheckReport(name="gradient_fd", passed=True, margin=0.0))


@pytest.mark.unit
class TestScheduleCheck:
    """Tests for check_schedule_properties."""

    @pytest.mark.parametrize("n_outer", [1, 2, 1000])
    def test_recursion_satisfies_all_bounds(self, n_outer):
        report = check_schedule_properties(n_outer)

        assert report.passed, report.summary()
        assert report.margin >= 0.0
        assert report.witness is None

    def test_corrupted_recursion_fails_with_replayable_witness(self):
        """
        Negative control: a recursion that never moves the weights.

        Verifies:
            - The check fails and names the violated bound.
            - Replaying the witness yields the same failure.
        """
        report = check_schedule_properties(10, corrupt_advance_weights)

        assert not report.passed
        assert report.margin < 0.0
        # the bound 2/(s+2) is furthest below the frozen 2/3 at the last entry, s = N+1
        assert report.witness["violated"] == "alpha2_bound"
        assert report.witness["s"] == 11
        assert report.margin == pytest.approx(2.0 / 13.0 - 2.0 / 3.0)

        replayed = replay_witness(report)
        assert not replayed.passed
        assert replayed.margin == report.margin

    def test_rejects_empty_horizon(self):
        with pytest.raises(ValueError):
            check_schedule_properties(0)


@pytest.mark.unit
class TestGradientChecks:
    """Tests for the unbiasedness, variance and finite-difference checks."""

    def test_unbiasedness_on_random_states(self):
        p = desk_problem(n=40, d=6, loss=LossKind.LOGISTIC, seed=1)

        report = check_unbiasedness(p, random_states(p, 10, seed=1))

        assert report.passed, report.summary()

    def test_variance_bound_on_random_states(self):
        p = desk_problem(n=40, d=6, loss=LossKind.LOGISTIC, seed=2)

        report = check_variance_bound(p, random_states(p, 20, seed=2))

        assert report.passed, report.summary()

    def test_variance_bound_is_tight_at_snapshot(self):
        """With x_md equal to the snapshot both sides vanish and only the floor remains."""
        p = desk_problem(n=40, d=6, seed=3)
        x = np.random.default_rng(3).standard_normal(6)

        report = check_variance_bound(p, [(x, x)])

        assert report.passed
        assert report.margin <= 1e-11

    def test_variance_vanishes_for_single_sample(self):
        p = desk_problem(n=1, d=4, seed=4)

        report = check_variance_bound(p, random_states(p, 5, seed=4))

        assert report.passed

    @pytest.mark.parametrize("loss", [LossKind.SQUARED, LossKind.LOGISTIC])
    def test_finite_differences(self, loss):
        p = desk_problem(n=50, d=8, loss=loss, seed=5)

        report = check_gradient_fd(p, points=20, seed=5)

        assert report.passed, report.summary()

    def test_logistic_gradient_at_origin(self):
        """At x = 0 the sigmoid is 1/2, so grad f(0) = -(1/n) sum_i b_i w_i / 2."""
        rng = np.random.default_rng(6)
        X = rng.standard_normal((9, 3))
        b = np.where(rng.standard_normal(9) > 0, 1.0, -1.0)
        p = Problem.build(Dataset(features=as_csr(X), labels=b), LossKind.LOGISTIC,
                          np.eye(3), -np.eye(3), np.zeros(3), 0.0)

        np.testing.assert_allclose(full_gradient(p, np.zeros(3)), -(b @ X) / 9 / 2, rtol=1e-14)

    def test_empty_states_rejected(self):
        p = desk_problem(n=10, d=3, seed=0)

        with pytest.raises(ValueError):
            check_unbiasedness(p, [])


@pytest.mark.unit
class TestSubproblemCheck:
    """Tests for check_subproblem_optimality."""

    @pytest.mark.parametrize("chi", [0, 1])
    def test_recorded_steps_are_optimal(self, chi):
        p = desk_problem(n=40, d=8, nu=0.05, seed=7)

        report = check_subproblem_optimality(p, record_trajectory(p, chi=chi, seed=7, steps=40))

        assert report.passed, report.summary()

    def test_unregularized_y_step(self):
        p = desk_problem(n=40, d=8, nu=0.0, seed=8)

        report = check_subproblem_optimality(p, record_trajectory(p, chi=1, seed=8, steps=20))

        assert report.passed, report.summary()

    def test_perturbed_step_fails_and_replays(self):
        """
        A step whose x was nudged after the fact must fail, and the witness
        must reproduce the failure on the same problem.
        """
        p = desk_problem(n=40, d=8, nu=0.05, seed=9)
        records = record_trajectory(p, chi=1, seed=9, steps=10)
        records[4] = dataclasses.replace(records[4], x=records[4].x + 1e-3)

        report = check_subproblem_optimality(p, records)

        assert not report.passed
        assert report.witness["t"] == 5
        assert not replay_witness(report, p).passed

    def test_replay_needs_problem(self):
        p = desk_problem(n=10, d=3, seed=0)
        records = record_trajectory(p, chi=1, seed=0, steps=2)
        records[0] = dataclasses.replace(records[0], x=records[0].x + 1.0)
        report = check_subproblem_optimality(p, records)

        with pytest.raises(ValueError, match="needs the problem"):
            replay_witness(report)


@pytest.mark.unit
class TestReductionCheck:
    @pytest.mark.parametrize("chi", [0, 1])
    def test_reductions_hold(self, chi):
        p = desk_problem(n=30, d=6, seed=10)

        report = check_reduction_equivalence(p, seed=2, passes=3.0, outer_steps=20, chi=chi)

        assert report.passed, report.summary()


@pytest.mark.unit
class TestSuite:
    """Tests for report formatting and the suite exit status, with checks mocked."""

    def test_format_lists_witness_of_failures(self):
        reports = [
            CheckReport(name="a", passed=True, margin=1.0),
            CheckReport(name="b", passed=False, margin=-1.0, witness={"s": 2}),
        ]

        text = format_reports(reports)

        assert text.splitlines() == [
            "[PASS] a: margin=1.000000e+00",
            "[FAIL] b: margin=-1.000000e+00",
            '  witness: {"s": 2}',
            "1/2 checks passed",
        ]

    @patch("src.verify.suite.run_checks")
    def test_exit_status(self, mock_run_checks):
        mock_run_checks.return_value = [CheckReport(name="a", passed=True, margin=0.5)]
        stream = io.StringIO()

        assert verify_suite(seed=3, stream=stream) == 0
        mock_run_checks.assert_called_once_with(3, False)
        assert "1/1 checks passed" in stream.getvalue()

        mock_run_checks.return_value.append(CheckReport(name="b", passed=False, margin=-1.0, witness={}))
        assert verify_suite(stream=io.StringIO()) == 1
