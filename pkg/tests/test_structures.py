"""
Tests for bilinear structures and their Lie/Jordan algebras.
"""

import numpy as np
import pytest

from liesplit.errors import DimensionMismatch, InvalidStructure, SingularCustomJ
from liesplit.matkit import expm
from liesplit.structures import (
    AlgebraSide,
    BilinearStructure,
    StructureKind,
    closed_form_dimension,
    commutator,
    group_residual,
    is_member,
    j_adjoint,
    j_inner,
    jordan_product,
    jordan_projector,
    lie_projector,
    membership_residual,
    projector_dimension,
    realize,
)


class TestBilinearStructure:
    """Construction and realization of J."""

    def test_pseudo_euclidean_1_1(self):
        J = BilinearStructure.pseudo_euclidean(1, 1)
        np.testing.assert_array_equal(realize(J), [[1.0, 0.0], [0.0, -1.0]])
        np.testing.assert_array_equal(J.inverse, J.matrix)
        assert J.sign == 1

    def test_symplectic_1(self):
        J = BilinearStructure.symplectic(1)
        np.testing.assert_array_equal(realize(J), [[0.0, 1.0], [-1.0, 0.0]])
        np.testing.assert_array_equal(J.inverse, -J.matrix)
        assert J.sign == -1
        assert not J.is_symmetric

    def test_identity(self):
        J = BilinearStructure.identity(3)
        assert J.kind is StructureKind.IDENTITY
        np.testing.assert_array_equal(J.matrix, np.eye(3))

    def test_realized_matrix_is_read_only(self):
        J = BilinearStructure.pseudo_euclidean(2, 1)
        with pytest.raises(ValueError):
            J.matrix[0, 0] = 5.0

    def test_custom_symmetric(self):
        J = BilinearStructure.custom(np.array([[2.0, 1.0], [1.0, 3.0]]))
        assert J.sign == 1
        np.testing.assert_allclose(J.matrix @ J.inverse, np.eye(2), atol=1e-14)

    def test_custom_not_symmetric(self):
        with pytest.raises(InvalidStructure):
            BilinearStructure.custom(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_custom_singular(self):
        with pytest.raises(SingularCustomJ):
            BilinearStructure.custom(np.array([[1.0, 1.0], [1.0, 1.0]]))

    def test_invalid_sizes(self):
        with pytest.raises(ValueError):
            BilinearStructure.symplectic(0)
        with pytest.raises(ValueError):
            BilinearStructure.pseudo_euclidean(-1, 2)

    @pytest.mark.parametrize("text, n", [("identity", 3), ("pq:2,1", 3), ("symplectic:2", 4)])
    def test_descriptor_round_trip(self, text, n):
        J = BilinearStructure.from_descriptor(text, n)
        assert J.descriptor() == text
        assert J.n == n

    def test_descriptor_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            BilinearStructure.from_descriptor("pq:2,2", 3)

    def test_descriptor_malformed(self):
        with pytest.raises(ValueError):
            BilinearStructure.from_descriptor("pq:two", 2)
        with pytest.raises(ValueError):
            BilinearStructure.from_descriptor("lorentz", 2)

    def test_custom_descriptor_uses_loader(self):
        J = BilinearStructure.from_descriptor(
            "custom:J.mtx", 2, load_matrix=lambda path: np.array([[0.0, 2.0], [-2.0, 0.0]])
        )
        assert J.kind is StructureKind.CUSTOM
        assert J.sign == -1


class TestAdjointAndMembership:
    """J-adjoint and algebra membership."""

    def test_adjoint_pq(self):
        J = BilinearStructure.pseudo_euclidean(1, 1)
        A = np.array([[1.0, 2.0], [3.0, 4.0]])
        np.testing.assert_array_equal(j_adjoint(A, J), [[1.0, -3.0], [-2.0, 4.0]])

    def test_adjoint_is_involution(self, structure, rng):
        A = rng.standard_normal((structure.n, structure.n))
        np.testing.assert_allclose(j_adjoint(j_adjoint(A, structure), structure), A, atol=1e-13)

    def test_adjoint_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            j_adjoint(np.eye(3), BilinearStructure.identity(2))

    def test_skew_is_lie_for_identity(self):
        J = BilinearStructure.identity(3)
        W = np.array([[0.0, 1.0, 2.0], [-1.0, 0.0, 3.0], [-2.0, -3.0, 0.0]])
        assert membership_residual(W, J, AlgebraSide.LIE) == 0.0
        assert is_member(W, J, AlgebraSide.LIE)
        assert not is_member(W, J, AlgebraSide.JORDAN)

    def test_projectors_land_in_algebras(self, structure, rng):
        X = rng.standard_normal((structure.n, structure.n))
        assert is_member(lie_projector(X, structure), structure, AlgebraSide.LIE)
        assert is_member(jordan_projector(X, structure), structure, AlgebraSide.JORDAN)

    def test_projectors_idempotent(self, structure, rng):
        X = rng.standard_normal((structure.n, structure.n))
        P = lie_projector(X, structure)
        np.testing.assert_allclose(lie_projector(P, structure), P, atol=1e-13)

    def test_commutator_closure(self, structure, rng):
        """Commutators of Lie members stay in the Lie algebra."""
        n = structure.n
        for _ in range(20):
            A = lie_projector(rng.standard_normal((n, n)), structure)
            B = lie_projector(rng.standard_normal((n, n)), structure)
            C = commutator(A, B)
            scale = np.linalg.norm(A) * np.linalg.norm(B)
            assert membership_residual(C, structure, AlgebraSide.LIE) <= 1e-10 * scale

    def test_jordan_product_closure(self, structure, rng):
        """Jordan products of Jordan members stay in the Jordan algebra."""
        n = structure.n
        for _ in range(20):
            A = jordan_projector(rng.standard_normal((n, n)), structure)
            B = jordan_projector(rng.standard_normal((n, n)), structure)
            C = jordan_product(A, B)
            scale = np.linalg.norm(A) * np.linalg.norm(B)
            assert membership_residual(C, structure, AlgebraSide.JORDAN) <= 1e-10 * scale

    def test_group_residual_of_exponential(self, structure, rng):
        """exp of a Lie member preserves the form."""
        W = lie_projector(rng.standard_normal((structure.n, structure.n)), structure)
        Q = expm(0.5 * W / np.linalg.norm(W))
        assert group_residual(Q, structure) <= 1e-12

    def test_j_inner_identity_is_frobenius(self, rng):
        A = rng.standard_normal((3, 3))
        B = rng.standard_normal((3, 3))
        assert j_inner(A, B, BilinearStructure.identity(3)) == pytest.approx(float(np.sum(A * B)), rel=1e-13)


class TestDimensions:
    """Algebra dimensions from projector traces."""

    @pytest.mark.parametrize("n", [1, 2, 5, 10])
    def test_identity(self, n):
        J = BilinearStructure.identity(n)
        assert projector_dimension(J, AlgebraSide.LIE) == n * (n - 1) // 2
        assert projector_dimension(J, AlgebraSide.JORDAN) == n * (n + 1) // 2

    def test_pq_2_1(self):
        J = BilinearStructure.pseudo_euclidean(2, 1)
        assert projector_dimension(J, AlgebraSide.LIE) == 3
        assert projector_dimension(J, AlgebraSide.JORDAN) == 6

    @pytest.mark.parametrize("p, q", [(1, 1), (3, 2), (4, 6)])
    def test_pq_matches_closed_form(self, p, q):
        J = BilinearStructure.pseudo_euclidean(p, q)
        for side in AlgebraSide:
            assert projector_dimension(J, side) == closed_form_dimension(J, side)

    @pytest.mark.parametrize("m", [1, 2, 3, 5])
    def test_symplectic(self, m):
        J = BilinearStructure.symplectic(m)
        assert projector_dimension(J, AlgebraSide.LIE) == 2 * m * m + m
        assert projector_dimension(J, AlgebraSide.JORDAN) == 2 * m * m - m

    def test_dimensions_sum_to_n_squared(self, structure):
        total = sum(projector_dimension(structure, side) for side in AlgebraSide)
        assert total == structure.n ** 2

    def test_custom_has_no_closed_form(self):
        J = BilinearStructure.custom(np.diag([1.0, 2.0]))
        assert closed_form_dimension(J, AlgebraSide.LIE) is None
