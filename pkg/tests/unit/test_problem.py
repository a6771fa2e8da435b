"""Unit tests for the Problem layer.

Covers the loss components, smoothness constants, objective, constraint
residual and the primal-dual gap function on hand-sized instances whose
values can be worked out by hand.
"""

import numpy as np
import pytest
import scipy.sparse as sp

from src.config import LossKind
from src.exceptions import DimensionMismatchError
from src.ingestion import desk_problem
from src.linalg import as_csr
from src.problem import (
    Dataset,
    GapArguments,
    Problem,
    component_gradient,
    component_gradients,
    constraint_violation,
    full_gradient,
    gap,
    lasso_objective,
    loss_value,
    objective,
    residual,
    smoothness_constants,
)


def identity_problem(features, labels, loss=LossKind.SQUARED, nu=0.0) -> Problem:
    """Problem with A = I, B = -I, c = 0 over the given samples."""
    X = np.atleast_2d(np.asarray(features, dtype=float))
    d = X.shape[1]
    dataset = Dataset(features=as_csr(X), labels=np.asarray(labels, dtype=float))
    return Problem.build(dataset, loss, np.eye(d), -np.eye(d), np.zeros(d), nu)


@pytest.mark.unit
class TestProblemBuild:
    """Tests for Problem.build validation."""

    def test_rejects_nonconformable_constraints(self):
        dataset = Dataset(features=as_csr(np.eye(2)), labels=np.zeros(2))

        with pytest.raises(DimensionMismatchError):
            Problem.build(dataset, LossKind.SQUARED, np.eye(3), -np.eye(3), np.zeros(3), 0.1)
        with pytest.raises(DimensionMismatchError):
            Problem.build(dataset, LossKind.SQUARED, np.eye(2), -np.eye(3), np.zeros(2), 0.1)
        with pytest.raises(DimensionMismatchError):
            Problem.build(dataset, LossKind.SQUARED, np.eye(2), -np.eye(2), np.zeros(3), 0.1)

    def test_rejects_negative_nu(self):
        with pytest.raises(ValueError, match="nu"):
            identity_problem([[1.0, 0.0]], [0.0], nu=-1.0)

    def test_rejects_logistic_label_outside_pm_one(self):
        """
        Verify that logistic labels must be -1 or +1.

        LIBSVM files sometimes use {0, 1}; those must be rejected at build
        time, naming the first offending sample.
        """
        with pytest.raises(ValueError, match="sample 1"):
            identity_problem([[1.0, 0.0], [0.0, 1.0]], [1.0, 0.0], loss=LossKind.LOGISTIC)

    def test_rejects_all_zero_features(self):
        with pytest.raises(ValueError, match="zero smoothness"):
            identity_problem([[0.0, 0.0]], [1.0])

    def test_negative_identity_detection(self):
        p = identity_problem([[1.0, 0.0]], [0.0])
        assert p.b_is_negative_identity

        dataset = Dataset(features=as_csr(np.eye(2)), labels=np.zeros(2))
        q = Problem.build(dataset, LossKind.SQUARED, np.eye(2), -2.0 * np.eye(2), np.zeros(2), 0.0)
        assert not q.b_is_negative_identity

    def test_subset_keeps_constraints(self):
        p = desk_problem(n=20, d=6, seed=1)

        sub = p.subset([3, 7])

        assert sub.n == 2
        assert sub.d == p.d
        assert (sub.A != p.A).nnz == 0
        np.testing.assert_array_equal(sub.dataset.labels, p.dataset.labels[[3, 7]])


@pytest.mark.unit
class TestGradients:
    """Tests for component and full gradients."""

    def test_squared_component_gradient(self):
        """(w^T x - b) w with w = (1, 0), b = 0, x = (2, 5) is (2, 0)."""
        p = identity_problem([[1.0, 0.0]], [0.0])

        np.testing.assert_array_equal(component_gradient(p, 0, np.array([2.0, 5.0])), [2.0, 0.0])

    def test_logistic_gradient_saturates(self):
        p = identity_problem([[1.0, 0.0]], [1.0], loss=LossKind.LOGISTIC)

        grad = component_gradient(p, 0, np.array([800.0, 0.0]))

        assert np.all(np.isfinite(grad))
        assert np.abs(grad).max() < 1e-300

    def test_component_index_out_of_range(self):
        p = identity_problem([[1.0, 0.0]], [0.0])

        with pytest.raises(IndexError):
            component_gradient(p, 1, np.zeros(2))

    def test_single_sample_full_gradient_equals_component(self):
        p = identity_problem([[1.5, -2.0]], [0.3])
        x = np.array([0.2, 0.7])

        np.testing.assert_array_equal(full_gradient(p, x), component_gradient(p, 0, x))

    def test_squared_zero_point_zero_labels(self):
        p = identity_problem([[1.0, 2.0], [3.0, -1.0]], [0.0, 0.0])

        np.testing.assert_array_equal(full_gradient(p, np.zeros(2)), [0.0, 0.0])

    @pytest.mark.parametrize("loss", [LossKind.SQUARED, LossKind.LOGISTIC])
    def test_full_gradient_matches_sample_loop(self, loss):
        """
        Verify the full gradient against an index-order loop over components.

        Verifies:
            - The sparse two-product pass sums the same terms as the loop.
            - `component_gradients` stacks the same rows.
        """
        p = desk_problem(n=7, d=5, loss=loss, seed=4)
        x = np.random.default_rng(4).standard_normal(5)

        # Setup: explicit oracle
        total = np.zeros(p.d)
        for i in range(p.n):
            total += component_gradient(p, i, x)
        expected = total / p.n

        np.testing.assert_allclose(full_gradient(p, x), expected, rtol=1e-14, atol=1e-16)
        stacked = component_gradients(p, x).toarray()
        np.testing.assert_allclose(stacked[3], component_gradient(p, 3, x), rtol=1e-14, atol=1e-16)

    def test_gradient_dimension_mismatch(self):
        p = identity_problem([[1.0, 0.0]], [0.0])

        with pytest.raises(DimensionMismatchError):
            full_gradient(p, np.zeros(3))


@pytest.mark.unit
class TestSmoothness:
    """Tests for L_i, L_Q and L_f."""

    def test_rank_one_sample(self):
        p = identity_problem([[3.0, 4.0]], [0.0])

        lipschitz, l_q, l_f = smoothness_constants(p)

        np.testing.assert_allclose(lipschitz, [25.0])
        assert l_q == pytest.approx(25.0)
        assert l_f == pytest.approx(25.0, rel=1e-6)

    def test_two_orthonormal_samples(self):
        """Averaging e1 e1^T and e2 e2^T halves the curvature: L_f = 1/2, L_Q = 1."""
        p = identity_problem([[1.0, 0.0], [0.0, 1.0]], [0.0, 0.0])

        _, l_q, l_f = smoothness_constants(p)

        assert l_q == pytest.approx(1.0)
        assert l_f == pytest.approx(0.5, rel=1e-6)

    def test_logistic_quarter_factor(self):
        p = identity_problem([[3.0, 4.0]], [1.0], loss=LossKind.LOGISTIC)

        assert p.l_q == pytest.approx(25.0 / 4)

    def test_lq_dominates_lf(self):
        p = desk_problem(n=50, d=8, seed=2)

        assert p.l_q >= p.l_f > 0
        assert p.lipschitz.shape == (50,)

    @pytest.mark.parametrize("loss", [LossKind.SQUARED, LossKind.LOGISTIC])
    def test_component_gradients_are_lipschitz(self, loss):
        """||grad f_i(x) - grad f_i(z)|| <= L_i ||x - z|| on 100 random pairs."""
        p = desk_problem(n=40, d=6, loss=loss, seed=4)
        rng = np.random.default_rng(21)
        for _ in range(100):
            i = int(rng.integers(p.n))
            x, z = rng.standard_normal(p.d) * 3, rng.standard_normal(p.d) * 3

            change = np.linalg.norm(component_gradient(p, i, x) - component_gradient(p, i, z))

            assert change <= p.lipschitz[i] * np.linalg.norm(x - z) * (1 + 1e-10) + 1e-12

    def test_penalty_norm_of_desk_instance(self):
        """The chain-graph F = [G; I] on 20 attributes has ||F||^2 = 3 + 2 cos(pi/20)."""
        p = desk_problem(n=100, d=20)

        assert p.a_norm_sq == pytest.approx(3.0 + 2.0 * np.cos(np.pi / 20), rel=1e-3)


@pytest.mark.unit
class TestObjective:
    """Tests for objective, residual and the gap function."""

    def test_logistic_at_origin_is_ln2(self):
        p = identity_problem([[1.0, 2.0], [-1.0, 0.5]], [1.0, -1.0], loss=LossKind.LOGISTIC, nu=0.3)

        assert objective(p, np.zeros(2), np.zeros(2)) == pytest.approx(np.log(2.0), rel=1e-15)

    def test_squared_at_origin_is_half(self):
        p = identity_problem([[1.0, 2.0], [-1.0, 0.5]], [1.0, -1.0], nu=0.3)

        assert objective(p, np.zeros(2), np.zeros(2)) == pytest.approx(0.5, rel=1e-15)

    def test_interpolating_point_has_zero_objective(self):
        p = identity_problem([[1.0, 0.0], [0.0, 2.0]], [2.0, 4.0])

        assert objective(p, np.array([2.0, 2.0]), np.zeros(2)) == 0.0

    def test_l1_term(self):
        p = identity_problem([[1.0, 0.0]], [0.0], nu=0.5)

        assert objective(p, np.zeros(2), np.array([1.0, -3.0])) == pytest.approx(2.0)

    def test_lasso_objective_matches_split_form_on_constraint(self):
        p = desk_problem(n=30, d=6, nu=0.2, seed=3)
        x = np.random.default_rng(3).standard_normal(6)
        y = p.A @ x

        assert lasso_objective(p, x) == pytest.approx(objective(p, x, y), rel=1e-14)

    @pytest.mark.parametrize("loss", [LossKind.SQUARED, LossKind.LOGISTIC])
    def test_midpoint_convexity(self, loss):
        """F((w + w')/2) <= (F(w) + F(w'))/2 for the split objective on 100 random pairs."""
        p = desk_problem(n=40, d=6, loss=loss, nu=0.1, seed=8)
        rng = np.random.default_rng(13)
        for _ in range(100):
            x, x2 = rng.standard_normal(p.d) * 2, rng.standard_normal(p.d) * 2
            y, y2 = rng.standard_normal(p.y_dim), rng.standard_normal(p.y_dim)

            middle = objective(p, (x + x2) / 2, (y + y2) / 2)
            chord = (objective(p, x, y) + objective(p, x2, y2)) / 2

            assert middle <= chord + 1e-12 * max(1.0, abs(chord))

    def test_constraint_violation_examples(self):
        p = identity_problem([[1.0, 0.0]], [0.0])

        assert constraint_violation(p, np.array([0.4, -1.0]), np.array([0.4, -1.0])) == 0.0
        assert constraint_violation(p, np.array([1.0, 0.0]), np.zeros(2)) == 1.0
        np.testing.assert_array_equal(residual(p, np.array([1.0, 0.0]), np.zeros(2)), [1.0, 0.0])

    def test_y_dimension_checked(self):
        p = identity_problem([[1.0, 0.0]], [0.0])

        with pytest.raises(DimensionMismatchError):
            objective(p, np.zeros(2), np.zeros(3))

    def test_gap_vanishes_at_identical_points(self):
        p = desk_problem(n=10, d=4, seed=5)
        rng = np.random.default_rng(5)
        x, y, lam = rng.standard_normal(4), rng.standard_normal(p.y_dim), rng.standard_normal(p.y_dim)

        assert gap(p, GapArguments(x, y, lam, x, y, lam)) == 0.0

    def test_gap_between_feasible_points(self):
        """With equal multipliers and feasible points only the objectives remain."""
        p = desk_problem(n=10, d=4, nu=0.1, seed=6)
        rng = np.random.default_rng(6)
        x_bar, x = rng.standard_normal(4), rng.standard_normal(4)
        y_bar, y = p.A @ x_bar, p.A @ x
        lam = rng.standard_normal(p.y_dim)

        value = gap(p, GapArguments(x_bar, y_bar, lam, x, y, lam))

        expected = objective(p, x, y) - objective(p, x_bar, y_bar)
        assert value == pytest.approx(expected, rel=1e-12, abs=1e-14)

    def test_gap_term_by_term(self):
        p = desk_problem(n=12, d=5, loss=LossKind.LOGISTIC, nu=0.05, seed=7)
        rng = np.random.default_rng(7)
        m = p.y_dim
        x_bar, y_bar, lam_bar = rng.standard_normal(5), rng.standard_normal(m), rng.standard_normal(m)
        x, y, lam = rng.standard_normal(5), rng.standard_normal(m), rng.standard_normal(m)

        value = gap(p, GapArguments(x_bar, y_bar, lam_bar, x, y, lam))

        A, B = p.A.toarray(), p.B.toarray()
        expected = (
            loss_value(p, x) + p.nu * np.abs(y).sum() + lam_bar @ (A @ x + B @ y - p.c)
            - loss_value(p, x_bar) - p.nu * np.abs(y_bar).sum() - lam @ (A @ x_bar + B @ y_bar - p.c)
        )
        assert value == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_gap_rejects_wrong_multiplier_length(self):
        p = identity_problem([[1.0, 0.0]], [0.0])
        z = np.zeros(2)

        with pytest.raises(DimensionMismatchError):
            gap(p, GapArguments(z, z, np.zeros(3), z, z, np.zeros(3)))

    def test_problem_accepts_scipy_inputs(self):
        dataset = Dataset(features=as_csr(np.eye(3)), labels=np.zeros(3))

        p = Problem.build(dataset, "squared", sp.identity(3), -sp.identity(3), [0, 0, 0], 0.1)

        assert p.loss == LossKind.SQUARED
        assert p.a_norm_sq == pytest.approx(1.0)
