"""
Bilinear Structures and J-Quadratic Algebras

A BilinearStructure wraps an invertible matrix J with J^T = +J or J^T = -J.
Each J defines a Lie algebra {W : W^T J + J W = 0} and a complementary
Jordan algebra {W : W^T J - J W = 0}. This module builds the canonical J
matrices and provides adjoints, membership residuals, projectors and the
dimension counts of both algebras.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .config import get_config, pick
from .errors import (
    DimensionMismatch,
    InvalidStructure,
    SingularCustomJ,
    SingularMatrix,
)
from .matkit import as_square, fro, solve_dense

logger = logging.getLogger(__name__)


class StructureKind(Enum):
    """Kinds of bilinear structure matrix."""
    IDENTITY = "identity"
    PSEUDO_EUCLIDEAN = "pq"
    SYMPLECTIC = "symplectic"
    CUSTOM = "custom"


class AlgebraSide(Enum):
    """Which J-quadratic algebra: W^T J + J W = 0 (Lie) or W^T J - J W = 0 (Jordan)."""
    LIE = "lie"
    JORDAN = "jordan"


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class BilinearStructure:
    """
    An invertible J with J^T = sign * J.

    Build instances with the classmethods; the matrix and its inverse are
    computed once and stored read-only.
    """
    kind: StructureKind
    n: int
    sign: int
    p: int = 0
    q: int = 0
    m: int = 0
    matrix: np.ndarray = field(default=None, repr=False)
    inverse: np.ndarray = field(default=None, repr=False)

    @classmethod
    def identity(cls, n: int) -> "BilinearStructure":
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        eye = _frozen(np.eye(n))
        return cls(StructureKind.IDENTITY, n, 1, p=n, matrix=eye, inverse=eye)

    @classmethod
    def pseudo_euclidean(cls, p: int, q: int) -> "BilinearStructure":
        """I_{p,q} = diag(I_p, -I_q)."""
        if p < 0 or q < 0 or p + q < 1:
            raise ValueError(f"need p, q >= 0 and p + q >= 1, got p={p}, q={q}")
        ipq = _frozen(np.diag(np.concatenate([np.ones(p), -np.ones(q)])))
        return cls(StructureKind.PSEUDO_EUCLIDEAN, p + q, 1, p=p, q=q, matrix=ipq, inverse=ipq)

    @classmethod
    def symplectic(cls, m: int) -> "BilinearStructure":
        """The 2m x 2m matrix with +I_m upper-right and -I_m lower-left."""
        if m < 1:
            raise ValueError(f"m must be positive, got {m}")
        sigma = np.zeros((2 * m, 2 * m))
        sigma[:m, m:] = np.eye(m)
        sigma[m:, :m] = -np.eye(m)
        return cls(StructureKind.SYMPLECTIC, 2 * m, -1, m=m,
                   matrix=_frozen(sigma), inverse=_frozen(-sigma))

    @classmethod
    def custom(cls, matrix) -> "BilinearStructure":
        """
        A user-supplied J, which must be exactly symmetric or skew-symmetric.

        For a custom J with J^2 not a multiple of I, j_split (which uses
        J A^T J^-1) and j_adjoint (which uses J^-1 A^T J) no longer agree.
        """
        J = as_square(matrix, "J")
        if np.array_equal(J.T, J):
            sign = 1
        elif np.array_equal(J.T, -J):
            sign = -1
        else:
            raise InvalidStructure("custom J must satisfy J^T = J or J^T = -J exactly")
        try:
            inverse = solve_dense(J, np.eye(J.shape[0]))
        except SingularMatrix as e:
            raise SingularCustomJ(f"custom J is singular: {e}") from e
        return cls(StructureKind.CUSTOM, J.shape[0], sign,
                   matrix=_frozen(J), inverse=_frozen(inverse))

    @property
    def is_symmetric(self) -> bool:
        return self.sign == 1

    def descriptor(self) -> str:
        """CLI selector text for this structure."""
        if self.kind is StructureKind.IDENTITY:
            return "identity"
        if self.kind is StructureKind.PSEUDO_EUCLIDEAN:
            return f"pq:{self.p},{self.q}"
        if self.kind is StructureKind.SYMPLECTIC:
            return f"symplectic:{self.m}"
        return "custom"

    @classmethod
    def from_descriptor(
        cls,
        text: str,
        n: int,
        load_matrix: Optional[Callable[[Path], np.ndarray]] = None,
    ) -> "BilinearStructure":
        """
        Parse a selector (identity | pq:p,q | symplectic:m | custom:path).

        Args:
            text: Selector string.
            n: Dimension the structure must match.
            load_matrix: Reader used for custom:path.
        """
        kind, _, arg = text.partition(":")
        kind = kind.strip().lower()
        if kind == "identity":
            J = cls.identity(n)
        elif kind == "pq":
            try:
                p, q = (int(v) for v in arg.split(","))
            except ValueError:
                raise ValueError(f"bad pq selector '{text}', expected pq:p,q") from None
            J = cls.pseudo_euclidean(p, q)
        elif kind == "symplectic":
            try:
                m = int(arg)
            except ValueError:
                raise ValueError(f"bad symplectic selector '{text}', expected symplectic:m") from None
            J = cls.symplectic(m)
        elif kind == "custom":
            if not arg or load_matrix is None:
                raise ValueError("custom selector needs a path and a matrix loader")
            J = cls.custom(load_matrix(Path(arg)))
        else:
            raise ValueError(f"unknown J selector '{text}'")
        if J.n != n:
            raise DimensionMismatch(f"J selector '{text}' has dimension {J.n}, matrix has {n}")
        return J


def realize(J: BilinearStructure) -> np.ndarray:
    """The explicit J matrix (read-only). J.inverse holds J^-1."""
    return J.matrix


def check_dimension(A: np.ndarray, J: BilinearStructure, name: str = "A") -> np.ndarray:
    A = as_square(A, name)
    if A.shape[0] != J.n:
        raise DimensionMismatch(f"{name} is {A.shape[0]}x{A.shape[0]} but J is {J.n}x{J.n}")
    return A


def j_adjoint(A, J: BilinearStructure) -> np.ndarray:
    """A* = J^-1 A^T J."""
    A = check_dimension(A, J)
    return J.inverse @ A.T @ J.matrix


def j_reflect(A, J: BilinearStructure) -> np.ndarray:
    """J A^T J^-1, the involution whose eigenspaces are the two algebras."""
    A = check_dimension(A, J)
    return J.matrix @ A.T @ J.inverse


def membership_residual(W, J: BilinearStructure, side: AlgebraSide) -> float:
    """||W^T J + J W||_F for Lie, ||W^T J - J W||_F for Jordan."""
    W = check_dimension(W, J, "W")
    WtJ = W.T @ J.matrix
    JW = J.matrix @ W
    if side is AlgebraSide.LIE:
        return fro(WtJ + JW)
    return fro(WtJ - JW)


def is_member(W, J: BilinearStructure, side: AlgebraSide, rel: Optional[float] = None) -> bool:
    """Membership test: residual <= rel * (1 + ||W||_F)."""
    rel = pick(rel, get_config().structures.membership_rel)
    return membership_residual(W, J, side) <= rel * (1.0 + fro(W))


def lie_projector(X, J: BilinearStructure) -> np.ndarray:
    return 0.5 * (np.asarray(X, dtype=float) - j_reflect(X, J))


def jordan_projector(X, J: BilinearStructure) -> np.ndarray:
    return 0.5 * (np.asarray(X, dtype=float) + j_reflect(X, J))


def projector_dimension(J: BilinearStructure, side: AlgebraSide) -> int:
    """
    Dimension of one algebra as the trace of its projector.

    The projector is applied to each of the n^2 elementary matrices E_ij and
    the (i, j) coefficient of the image is summed.
    """
    project = lie_projector if side is AlgebraSide.LIE else jordan_projector
    n = J.n
    trace = 0.0
    E = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            E[i, j] = 1.0
            trace += project(E, J)[i, j]
            E[i, j] = 0.0
    return int(round(trace))


def closed_form_dimension(J: BilinearStructure, side: AlgebraSide) -> Optional[int]:
    """Textbook dimension of the algebra, or None for a custom J."""
    n = J.n
    if J.kind in (StructureKind.IDENTITY, StructureKind.PSEUDO_EUCLIDEAN):
        return n * (n - 1) // 2 if side is AlgebraSide.LIE else n * (n + 1) // 2
    if J.kind is StructureKind.SYMPLECTIC:
        m = J.m
        return 2 * m * m + m if side is AlgebraSide.LIE else 2 * m * m - m
    return None


def group_residual(Q, J: BilinearStructure) -> float:
    """||Q^T J Q - J||_F, zero exactly when Q preserves the form."""
    Q = check_dimension(Q, J, "Q")
    return fro(Q.T @ J.matrix @ Q - J.matrix)


def j_inner(A, B, J: BilinearStructure) -> float:
    """<A, B>_J = Tr(A^T J^T J B)."""
    A = check_dimension(A, J)
    B = check_dimension(B, J, "B")
    JtJ = J.matrix.T @ J.matrix
    return float(np.trace(A.T @ JtJ @ B))


def commutator(A, B) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    return A @ B - B @ A


def jordan_product(A, B) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    return 0.5 * (A @ B + B @ A)


__all__ = [
    "StructureKind",
    "AlgebraSide",
    "BilinearStructure",
    "realize",
    "check_dimension",
    "j_adjoint",
    "j_reflect",
    "membership_residual",
    "is_member",
    "lie_projector",
    "jordan_projector",
    "projector_dimension",
    "closed_form_dimension",
    "group_residual",
    "j_inner",
    "commutator",
    "jordan_product",
]
