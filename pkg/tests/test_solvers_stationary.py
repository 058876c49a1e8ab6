"""
Tests for STS, ADI and the classical stationary methods.
"""

import numpy as np
import pytest

from liesplit.errors import DimensionMismatch, ZeroDiagonal
from liesplit.matkit import spectral_radius
from liesplit.solvers import (
    SolverConfig,
    adi_iteration_matrix,
    adi_solve,
    classical_solve,
    kellogg_contraction,
    kron_shift_solve,
    sts_iteration_matrix,
    sts_parts,
    sts_solve,
)
from liesplit.solvers.base import factor_shifted
from liesplit.solvers.stationary import classical_splitting
from liesplit.splittings import KroneckerSum


def positive_definite_nonsymmetric(rng, n: int) -> np.ndarray:
    """(A + A^T)/2 is positive definite, A is far from symmetric."""
    X = rng.standard_normal((n, n))
    Y = rng.standard_normal((n, n))
    return X @ X.T / n + np.eye(n) + (Y - Y.T)


class TestSTS:
    """Skew-symmetric/triangular splitting iteration."""

    def test_parts(self):
        A = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]])
        T, S, lower = sts_parts(A, "upper")
        assert not lower
        np.testing.assert_array_equal(T + S, A)
        np.testing.assert_array_equal(T, np.triu(T))
        T, S, lower = sts_parts(A, "lower")
        assert lower
        np.testing.assert_array_equal(T, np.tril(T))
        np.testing.assert_array_equal(S, -S.T)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("direction", ["upper", "lower"])
    def test_converges(self, alpha, direction, rng):
        A = positive_definite_nonsymmetric(rng, 6)
        x_true = rng.standard_normal(6)
        report = sts_solve(A, A @ x_true, SolverConfig(alpha=alpha, estimate_rho=True), direction)
        assert report.converged
        assert report.method == f"sts-{direction}"
        assert report.details["positive_definite"]
        assert report.bound < 1.0
        assert report.rho_estimate < 1.0
        np.testing.assert_allclose(report.solution, x_true, atol=1e-7 * (1 + np.linalg.norm(x_true)))

    def test_kellogg_below_one(self, rng):
        """Cayley transform of a matrix with positive definite symmetric part contracts."""
        A = positive_definite_nonsymmetric(rng, 5)
        T, _, _ = sts_parts(A)
        for alpha in (0.1, 1.0, 10.0):
            assert kellogg_contraction(T, alpha) < 1.0

    def test_rho_below_kellogg(self, rng):
        """The skew Cayley factor is orthogonal, so rho is at most the triangular factor's norm."""
        A = positive_definite_nonsymmetric(rng, 5)
        T, _, _ = sts_parts(A)
        rho = spectral_radius(sts_iteration_matrix(A, 1.0))
        assert rho <= kellogg_contraction(T, 1.0) + 1e-12

    def test_lower_mirrors_upper(self, rng):
        """Lower STS on A^T has the same spectral radius as upper STS on A."""
        A = positive_definite_nonsymmetric(rng, 6)
        for alpha in (0.5, 2.0):
            upper = spectral_radius(sts_iteration_matrix(A, alpha, "upper"))
            lower = spectral_radius(sts_iteration_matrix(A.T, alpha, "lower"))
            assert lower == pytest.approx(upper, rel=1e-9)

    def test_upper_triangular_input(self):
        """With A already upper triangular the skew part vanishes."""
        A = np.array([[2.0, 1.0, 0.5], [0.0, 3.0, 1.0], [0.0, 0.0, 1.0]])
        T, S, _ = sts_parts(A, "upper")
        np.testing.assert_array_equal(S, np.zeros((3, 3)))
        np.testing.assert_array_equal(T, A)
        report = sts_solve(A, A @ np.ones(3), SolverConfig(alpha=1.0, estimate_rho=True))
        assert report.converged
        assert report.rho_estimate == pytest.approx(0.5, abs=1e-10)
        assert report.rho_estimate <= report.bound + 1e-12
        np.testing.assert_allclose(report.solution, np.ones(3), atol=1e-7)

    def test_upper_triangular_negative_diagonal_diverges(self):
        """A diagonal entry below zero puts |(alpha - a)/(alpha + a)| above 1."""
        A = np.array([[-0.5, 1.0], [0.0, 2.0]])
        report = sts_solve(A, np.ones(2), SolverConfig(alpha=1.0, max_iter=40, estimate_rho=True))
        assert report.rho_estimate == pytest.approx(3.0, abs=1e-10)
        assert not report.converged

    @pytest.mark.slow
    def test_converges_on_many_instances(self, rng):
        """50 random instances with positive definite symmetric part."""
        for _ in range(50):
            n = int(rng.integers(2, 17))
            A = positive_definite_nonsymmetric(rng, n)
            b = A @ rng.standard_normal(n)
            for alpha in (0.5, 1.0, 2.0):
                report = sts_solve(A, b, SolverConfig(alpha=alpha, tol=1e-8))
                assert report.converged
                assert report.bound < 1.0

    def test_rho_skipped_beyond_eigenvalue_limit(self, rng, override_config):
        override_config("matkit:\n  eig_max_n: 4\n")
        A = positive_definite_nonsymmetric(rng, 6)
        report = sts_solve(A, np.ones(6), SolverConfig(estimate_rho=True))
        assert report.converged
        assert report.rho_estimate is None

    def test_indefinite_still_runs(self):
        A = np.array([[1.0, 0.0], [0.0, -0.5]])
        report = sts_solve(A, np.ones(2), SolverConfig(alpha=1.0, max_iter=3))
        assert report.details["positive_definite"] is False
        assert report.iterations <= 3


class TestADI:
    """ADI on Kronecker sums."""

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    def test_laplacian(self, alpha, laplacian_1d):
        L = laplacian_1d(8)
        op = KroneckerSum(L, L)
        b = op.apply(np.ones(64))
        report = adi_solve(L, L, b, SolverConfig(alpha=alpha, estimate_rho=True))
        assert report.converged
        assert report.method == "adi"
        np.testing.assert_allclose(report.solution, np.ones(64), atol=1e-7)
        assert report.rho_estimate < 1.0

    def test_sweep_matches_dense_half_steps(self, rng):
        """One sweep equals the two shifted n^2 x n^2 solves done densely."""
        n, alpha = 4, 0.8
        A = rng.standard_normal((n, n)) + 3.0 * np.eye(n)
        B = rng.standard_normal((n, n)) + 3.0 * np.eye(n)
        b = rng.standard_normal(n * n)
        x0 = rng.standard_normal(n * n)
        eye = np.eye(n * n)
        left = np.kron(A, np.eye(n))
        right = np.kron(np.eye(n), B)
        half = np.linalg.solve(alpha * eye + left, (alpha * eye - right) @ x0 + b)
        expected = np.linalg.solve(alpha * eye + right, (alpha * eye - left) @ half + b)
        report = adi_solve(A, B, b, SolverConfig(alpha=alpha, max_iter=1, tol=1e-300, x0=x0))
        assert report.iterations == 1
        np.testing.assert_allclose(report.solution, expected, rtol=1e-11, atol=1e-11)

    def test_scalar_operators_contract_by_cayley_square(self):
        """A = B = cI: every sweep scales the error by ((alpha - c)/(alpha + c))^2."""
        n, c, alpha = 3, 2.0, 1.0
        A = c * np.eye(n)
        b = np.arange(1.0, n * n + 1.0)
        report = adi_solve(A, A, b, SolverConfig(alpha=alpha, max_iter=5, tol=1e-300, estimate_rho=True))
        factor = ((alpha - c) / (alpha + c)) ** 2
        history = np.array(report.residual_history)
        assert len(history) == 6
        np.testing.assert_allclose(history[1:] / history[:-1], factor, rtol=1e-8)
        assert report.rho_estimate == pytest.approx(factor, rel=1e-10)

    def test_zero_right_operator(self, laplacian_1d):
        """B = 0 reduces ADI to the Cayley transform of A (x) I."""
        A = laplacian_1d(4)
        alpha = 1.0
        lam = np.linalg.eigvalsh(A)
        expected = float(np.max(np.abs(alpha - lam) / (alpha + lam)))
        b = KroneckerSum(A, np.zeros((4, 4))).apply(np.ones(16))
        report = adi_solve(A, np.zeros((4, 4)), b, SolverConfig(alpha=alpha, estimate_rho=True))
        assert report.converged
        assert report.rho_estimate == pytest.approx(expected, rel=1e-9)
        np.testing.assert_allclose(report.solution, np.ones(16), atol=1e-7)

    def test_iteration_matrix_contracts(self, laplacian_1d):
        L = laplacian_1d(4)
        for alpha in (0.3, 1.0, 3.0):
            assert spectral_radius(adi_iteration_matrix(L, L, alpha)) < 1.0

    def test_iteration_matrix_size_cap(self, laplacian_1d):
        with pytest.raises(DimensionMismatch):
            adi_iteration_matrix(laplacian_1d(9), laplacian_1d(9), 1.0)

    def test_no_rho_above_eight(self, laplacian_1d):
        L = laplacian_1d(10)
        b = KroneckerSum(L, L).apply(np.ones(100))
        report = adi_solve(L, L, b, SolverConfig(estimate_rho=True))
        assert report.converged
        assert report.rho_estimate is None

    def test_size_limit(self, laplacian_1d):
        L = laplacian_1d(49)
        with pytest.raises(DimensionMismatch):
            adi_solve(L, L, np.ones(49 * 49))

    @pytest.mark.parametrize("side", ["left", "right"])
    def test_kron_shift_solve(self, side, rng):
        n, alpha = 4, 0.7
        A = rng.standard_normal((n, n)) + 3.0 * np.eye(n)
        R = rng.standard_normal((n, n))
        factor = np.kron(A, np.eye(n)) if side == "left" else np.kron(np.eye(n), A)
        expected = np.linalg.solve(alpha * np.eye(n * n) + factor, R.ravel())
        np.testing.assert_allclose(kron_shift_solve(A, alpha, R, side).ravel(), expected, atol=1e-12)

    @pytest.mark.parametrize("side", ["left", "right"])
    def test_kron_shift_reuses_factor(self, side, rng):
        n, alpha = 5, 1.3
        A = rng.standard_normal((n, n)) + 3.0 * np.eye(n)
        R = rng.standard_normal((n, n))
        factor = factor_shifted(A, alpha, "A")
        np.testing.assert_allclose(
            kron_shift_solve(A, alpha, R, side, factor=factor), kron_shift_solve(A, alpha, R, side), atol=1e-13
        )

    def test_explicit_limit_from_config(self, laplacian_1d, override_config):
        override_config("solvers:\n  adi_explicit_max_n: 3\n")
        with pytest.raises(DimensionMismatch):
            adi_iteration_matrix(laplacian_1d(4), laplacian_1d(4), 1.0)
        assert adi_iteration_matrix(laplacian_1d(4), laplacian_1d(4), 1.0, max_n=4).shape == (16, 16)

    def test_kron_shift_bad_side(self):
        with pytest.raises(ValueError):
            kron_shift_solve(np.eye(2), 1.0, np.eye(2), "middle")


class TestClassical:
    """Jacobi and Gauss-Seidel."""

    def test_jacobi_2x2(self):
        A = np.array([[2.0, 1.0], [1.0, 2.0]])
        report = classical_solve(A, [3.0, 3.0], "jacobi")
        assert report.rho_estimate == pytest.approx(0.5, abs=1e-13)
        assert report.converged
        assert report.method == "jacobi"
        np.testing.assert_allclose(report.solution, [1.0, 1.0], atol=1e-9)

    @pytest.mark.parametrize("method", ["gauss_seidel_forward", "gauss_seidel_backward"])
    def test_gauss_seidel(self, method, rng):
        n = 8
        A = rng.standard_normal((n, n))
        A += np.diag(np.sum(np.abs(A), axis=1) + 1.0)
        x_true = rng.standard_normal(n)
        report = classical_solve(A, A @ x_true, method)
        assert report.converged
        assert report.rho_estimate < 1.0
        np.testing.assert_allclose(report.solution, x_true, atol=1e-8)

    def test_gauss_seidel_beats_jacobi(self):
        """For tridiag(-1, 2, -1), rho(GS) = rho(J)^2."""
        n = 6
        A = 2.0 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
        jacobi = classical_solve(A, np.ones(n), "jacobi", SolverConfig(max_iter=1))
        gauss = classical_solve(A, np.ones(n), "gauss_seidel_forward", SolverConfig(max_iter=1))
        assert gauss.rho_estimate == pytest.approx(jacobi.rho_estimate ** 2, rel=1e-9)

    def test_splitting_reassembles(self, rng):
        A = rng.standard_normal((5, 5))
        for method in ("jacobi", "gauss_seidel_forward", "gauss_seidel_backward"):
            M, N, _ = classical_splitting(A, method)
            np.testing.assert_array_equal(M - N, A)

    @pytest.mark.parametrize("method", ["jacobi", "gauss_seidel_forward", "gauss_seidel_backward"])
    def test_diagonal_one_iteration(self, method):
        A = np.diag([2.0, 4.0, 5.0])
        report = classical_solve(A, [2.0, 4.0, 5.0], method)
        assert report.converged
        assert report.iterations == 1
        assert report.rho_estimate == 0.0
        np.testing.assert_array_equal(report.solution, np.ones(3))

    def test_gauss_seidel_nilpotent_exact(self):
        """Forward GS on an upper triangular matrix with unit diagonal: M^-1 N is nilpotent."""
        A = np.array([[1.0, 2.0], [0.0, 1.0]])
        report = classical_solve(A, [3.0, 1.0], "gauss_seidel_forward")
        assert report.converged
        assert report.iterations == 2
        assert report.rho_estimate == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_array_equal(report.solution, [1.0, 1.0])

    @pytest.mark.parametrize("method", ["jacobi", "gauss_seidel_forward", "gauss_seidel_backward"])
    def test_large_system_skips_rho(self, method):
        """Above the dense eigenvalue limit the solve still runs and rho is None."""
        n = 300
        A = 4.0 * np.eye(n) + np.eye(n, k=1)
        x_true = np.ones(n)
        report = classical_solve(A, A @ x_true, method)
        assert report.converged
        assert report.rho_estimate is None
        np.testing.assert_allclose(report.solution, x_true, atol=1e-7)

    def test_zero_diagonal(self):
        with pytest.raises(ZeroDiagonal) as info:
            classical_solve(np.array([[1.0, 1.0], [1.0, 0.0]]), [1.0, 1.0])
        assert info.value.index == 1

    def test_divergent_reported(self):
        """rho > 1: not converged, no exception."""
        A = np.array([[1.0, 2.0], [2.0, 1.0]])
        report = classical_solve(A, [1.0, 1.0], "jacobi", SolverConfig(max_iter=20))
        assert report.rho_estimate == pytest.approx(2.0, abs=1e-13)
        assert not report.converged
