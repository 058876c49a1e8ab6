"""
Tests for the dense kernels: pivoted solves, eigenvalues, expm, sqrtm.
"""

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from liesplit.errors import (
    DimensionMismatch,
    NegativeRealEigenvalue,
    NonFiniteEntries,
    NotSymmetric,
    SingularMatrix,
)
from liesplit.matkit import (
    as_dense,
    as_vector,
    eigenvalues_general,
    expm,
    lu_factor,
    solve_dense,
    spectral_radius,
    sqrtm_principal,
    sym_eigenvalues,
)


def assert_same_spectrum(ours, reference, atol):
    """Every value has a partner within atol in the other set."""
    ours = np.asarray(ours, dtype=complex)
    reference = np.asarray(reference, dtype=complex)
    assert ours.shape == reference.shape
    for value in ours:
        assert np.min(np.abs(reference - value)) <= atol
    for value in reference:
        assert np.min(np.abs(ours - value)) <= atol


class TestValidation:
    """Input checks shared by every kernel."""

    def test_non_finite(self):
        with pytest.raises(NonFiniteEntries):
            as_dense([[1.0, np.nan], [0.0, 1.0]])

    def test_not_matrix(self):
        with pytest.raises(DimensionMismatch):
            as_dense([1.0, 2.0])

    def test_vector_from_column(self):
        """A column matrix is accepted as a vector."""
        vec = as_vector([[1.0], [2.0]], 2)
        assert vec.shape == (2,)

    def test_vector_wrong_length(self):
        with pytest.raises(DimensionMismatch):
            as_vector([1.0, 2.0, 3.0], 2)

    def test_solve_non_square(self):
        with pytest.raises(DimensionMismatch):
            solve_dense(np.ones((2, 3)), np.ones(2))


class TestSolveDense:
    """Tests for the pivoted solve."""

    def test_matches_numpy(self, rng):
        """Random well-conditioned system agrees with numpy.linalg.solve."""
        A = rng.standard_normal((8, 8)) + 8.0 * np.eye(8)
        b = rng.standard_normal(8)
        np.testing.assert_allclose(solve_dense(A, b), np.linalg.solve(A, b), rtol=1e-12, atol=1e-14)

    def test_needs_pivoting(self):
        """Zero leading entry is handled by row exchange."""
        A = np.array([[0.0, 1.0], [1.0, 0.0]])
        np.testing.assert_allclose(solve_dense(A, [2.0, 3.0]), [3.0, 2.0])

    def test_singular(self):
        """Rank-deficient matrix raises SingularMatrix with the pivot index."""
        with pytest.raises(SingularMatrix) as info:
            lu_factor(np.array([[1.0, 2.0], [2.0, 4.0]]))
        assert info.value.index == 1

    def test_factor_reuse(self, rng):
        """One factorization serves several right-hand sides."""
        A = rng.standard_normal((5, 5)) + 5.0 * np.eye(5)
        factor = lu_factor(A)
        B = rng.standard_normal((5, 3))
        np.testing.assert_allclose(A @ factor.solve(B), B, atol=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**32 - 1), n=st.integers(min_value=1, max_value=10))
    def test_residual_property(self, seed, n):
        """Diagonally dominant systems solve to a tiny backward residual."""
        gen = np.random.default_rng(seed)
        A = gen.standard_normal((n, n))
        A += np.diag(np.sum(np.abs(A), axis=1) + 1.0)
        b = gen.standard_normal(n)
        x = solve_dense(A, b)
        assert np.linalg.norm(A @ x - b) <= 1e-12 * (np.linalg.norm(A) * np.linalg.norm(x) + np.linalg.norm(b))


class TestSymEigenvalues:
    """Tests for cyclic Jacobi."""

    def test_diagonal(self):
        report = sym_eigenvalues(np.diag([3.0, 1.0, 2.0]))
        np.testing.assert_array_equal(report.real, [1.0, 2.0, 3.0])

    def test_two_by_two(self):
        report = sym_eigenvalues(np.array([[2.0, 1.0], [1.0, 2.0]]))
        np.testing.assert_allclose(report.real, [1.0, 3.0], atol=1e-14)

    def test_matches_eigvalsh(self, rng):
        """Random symmetric 9x9 agrees with numpy.linalg.eigvalsh."""
        X = rng.standard_normal((9, 9))
        A = X + X.T
        report = sym_eigenvalues(A)
        np.testing.assert_allclose(report.real, np.linalg.eigvalsh(A), atol=1e-11 * np.linalg.norm(A))
        assert report.is_symmetric_input

    def test_sum_is_trace(self, rng):
        for n in (2, 5, 12):
            X = rng.standard_normal((n, n))
            A = X + X.T
            assert np.sum(sym_eigenvalues(A).real) == pytest.approx(np.trace(A), abs=1e-11 * np.linalg.norm(A))

    def test_rejects_nonsymmetric(self):
        with pytest.raises(NotSymmetric):
            sym_eigenvalues(np.array([[1.0, 2.0], [0.0, 1.0]]))


class TestEigenvaluesGeneral:
    """Tests for Hessenberg plus shifted QR."""

    def test_rotation(self):
        """90-degree rotation has eigenvalues -i and +i."""
        report = eigenvalues_general(np.array([[0.0, -1.0], [1.0, 0.0]]))
        values = sorted(report.values, key=lambda v: v.imag)
        np.testing.assert_allclose(values, [-1j, 1j], atol=1e-14)

    def test_triangular(self):
        A = np.array([[1.0, 5.0, 2.0], [0.0, -2.0, 3.0], [0.0, 0.0, 4.0]])
        report = eigenvalues_general(A)
        np.testing.assert_allclose(report.values, [-2.0, 1.0, 4.0], atol=1e-13)

    def test_symmetric_input_is_real(self, rng):
        X = rng.standard_normal((6, 6))
        report = eigenvalues_general(X + X.T)
        assert report.is_symmetric_input
        assert np.all(report.values.imag == 0.0)

    def test_matches_numpy(self, rng):
        """Random nonsymmetric 10x10 agrees with numpy.linalg.eigvals."""
        A = rng.standard_normal((10, 10))
        report = eigenvalues_general(A)
        assert_same_spectrum(report.values, np.linalg.eigvals(A), atol=1e-9)

    def test_agrees_with_jacobi_on_symmetric_input(self, rng):
        X = rng.standard_normal((8, 8))
        A = X + X.T
        general = np.sort(eigenvalues_general(A).values.real)
        np.testing.assert_allclose(general, sym_eigenvalues(A).real, atol=1e-10 * np.linalg.norm(A))

    def test_spectral_radius(self):
        assert spectral_radius(np.diag([1.0, -3.0, 2.0])) == pytest.approx(3.0, abs=1e-14)

    def test_size_cap(self):
        with pytest.raises(DimensionMismatch):
            eigenvalues_general(np.eye(4), max_n=3)


class TestExpm:
    """Tests for scaling and squaring."""

    def test_zero(self):
        np.testing.assert_array_equal(expm(np.zeros((3, 3))), np.eye(3))

    def test_diagonal(self):
        np.testing.assert_allclose(expm(np.diag([1.0, 2.0])), np.diag([np.e, np.e ** 2]), rtol=1e-13)

    def test_matches_scipy(self, rng):
        """Random matrix of norm ~ 10 agrees with scipy.linalg.expm."""
        A = 3.0 * rng.standard_normal((6, 6)) / np.sqrt(6)
        reference = scipy.linalg.expm(A)
        assert np.linalg.norm(expm(A) - reference) <= 1e-11 * np.linalg.norm(reference)

    def test_nilpotent(self):
        """exp of a single Jordan block with eigenvalue 0 is I + N."""
        np.testing.assert_allclose(expm(np.array([[0.0, 1.0], [0.0, 0.0]])), [[1.0, 1.0], [0.0, 1.0]], atol=1e-15)

    def test_inverse_is_exp_of_negative(self, rng):
        for _ in range(20):
            X = rng.standard_normal((4, 4))
            A = rng.uniform(0.0, 5.0) * X / np.linalg.norm(X)
            np.testing.assert_allclose(expm(A) @ expm(-A), np.eye(4), atol=1e-10)

    def test_skew_gives_orthogonal(self, rng):
        X = rng.standard_normal((5, 5))
        Q = expm(X - X.T)
        np.testing.assert_allclose(Q.T @ Q, np.eye(5), atol=1e-12)


class TestSqrtmPrincipal:
    """Tests for Denman-Beavers."""

    def test_diagonal(self):
        np.testing.assert_allclose(sqrtm_principal(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-12)

    def test_spd_matches_scipy(self, rng):
        X = rng.standard_normal((6, 6))
        B = X @ X.T + np.eye(6)
        A = 0.5 * (B + B.T)
        Y = sqrtm_principal(A)
        np.testing.assert_allclose(Y, np.real(scipy.linalg.sqrtm(A)), atol=1e-9 * np.linalg.norm(A))
        np.testing.assert_array_equal(Y, Y.T)

    def test_nonsymmetric(self, rng):
        """Near-identity nonsymmetric input: X^2 reproduces A."""
        A = np.eye(5) + 0.3 * rng.standard_normal((5, 5)) / np.sqrt(5)
        Y = sqrtm_principal(A)
        assert np.linalg.norm(Y @ Y - A) <= 1e-10 * np.linalg.norm(A)
        assert np.all(np.linalg.eigvals(Y).real > 0)

    def test_negative_eigenvalue(self):
        with pytest.raises(NegativeRealEigenvalue):
            sqrtm_principal(np.diag([-1.0, 1.0]))

    def test_singular(self):
        """Zero eigenvalue sits on the closed negative axis."""
        with pytest.raises(NegativeRealEigenvalue):
            sqrtm_principal(np.diag([0.0, 1.0]))
