"""
Matrix Splittings

Every additive splitting A = B + C (+ D) used by the solvers, returned as a
Splitting of tagged dense parts. Pattern parts (triangular, diagonal) are
zeroed explicitly so their structure is exact; algebra parts (lie, jordan)
hold to floating-point accuracy.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Tuple, Union

import numpy as np

from .config import get_config, pick
from .errors import DimensionMismatch, NotAKroneckerSum
from .matkit import as_square, as_vector, fro
from .structures import BilinearStructure, check_dimension, j_reflect

logger = logging.getLogger(__name__)


class SplittingScheme(Enum):
    """Splitting schemes."""
    J_SPLIT = "j_split"
    DOOLITTLE = "doolittle"
    CROUT = "crout"
    LDU = "ldu"
    JACOBI = "jacobi"
    SKEW_UPPER = "skew_upper"
    SKEW_LOWER = "skew_lower"
    IWASAWA = "iwasawa"
    LEVI = "levi"
    KRONECKER_SUM = "kronecker_sum"


class PartTag(Enum):
    """Structural role of a splitting part."""
    LIE = "lie"
    JORDAN = "jordan"
    LOWER = "lower"
    UPPER = "upper"
    STRICT_LOWER = "strict_lower"
    STRICT_UPPER = "strict_upper"
    DIAGONAL = "diagonal"
    OFF_DIAGONAL = "off_diagonal"
    TRACE = "trace"
    TRACELESS = "traceless"
    LEFT_FACTOR = "left_factor"
    RIGHT_FACTOR = "right_factor"


TRIANGULAR_MODES = (
    SplittingScheme.DOOLITTLE,
    SplittingScheme.CROUT,
    SplittingScheme.LDU,
    SplittingScheme.JACOBI,
    SplittingScheme.SKEW_UPPER,
    SplittingScheme.SKEW_LOWER,
    SplittingScheme.IWASAWA,
    SplittingScheme.LEVI,
)


@dataclass(frozen=True)
class Splitting:
    """An ordered, tagged additive decomposition."""
    scheme: SplittingScheme
    parts: Tuple[Tuple[PartTag, np.ndarray], ...]

    def __iter__(self) -> Iterator[Tuple[PartTag, np.ndarray]]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    @property
    def tags(self) -> Tuple[PartTag, ...]:
        return tuple(tag for tag, _ in self.parts)

    def part(self, tag: Union[PartTag, str]) -> np.ndarray:
        tag = PartTag(tag)
        for t, value in self.parts:
            if t is tag:
                return value
        raise KeyError(f"{self.scheme.value} splitting has no '{tag.value}' part")

    def total(self) -> np.ndarray:
        return sum(value for _, value in self.parts)

    def reconstruction_residual(self, A) -> float:
        return fro(self.total() - np.asarray(A, dtype=float))


def j_split(A, J: BilinearStructure) -> Splitting:
    """
    Lie-Jordan splitting A = S + H relative to J.

    S = (A - J A^T J^-1) / 2 is tagged lie and H = (A + J A^T J^-1) / 2 is
    tagged jordan. With J = I this is the skew/symmetric splitting.
    """
    A = check_dimension(A, J)
    reflected = j_reflect(A, J)
    S = 0.5 * (A - reflected)
    H = 0.5 * (A + reflected)
    return Splitting(SplittingScheme.J_SPLIT, ((PartTag.LIE, S), (PartTag.JORDAN, H)))


def triangular_split(A, mode: Union[SplittingScheme, str]) -> Splitting:
    """
    Pattern-based splittings of a square matrix.

    With A = L0 + D + U0 (strict lower, diagonal, strict upper):
        doolittle:  L0 | D + U0
        crout:      L0 + D | U0
        ldu:        L0 | D | U0
        jacobi:     D | L0 + U0
        skew_upper: L0 - L0^T | D + U0 + L0^T
        skew_lower: U0 - U0^T | D + L0 + U0^T
        iwasawa:    L0 - L0^T | D | U0 + L0^T
        levi:       (Tr A / n) I | A - (Tr A / n) I
    """
    mode = SplittingScheme(mode)
    if mode not in TRIANGULAR_MODES:
        raise ValueError(f"'{mode.value}' is not a triangular splitting mode")
    A = as_square(A)
    L0 = np.tril(A, -1)
    U0 = np.triu(A, 1)
    D = np.diag(np.diag(A))

    if mode is SplittingScheme.DOOLITTLE:
        parts = ((PartTag.STRICT_LOWER, L0), (PartTag.UPPER, D + U0))
    elif mode is SplittingScheme.CROUT:
        parts = ((PartTag.LOWER, L0 + D), (PartTag.STRICT_UPPER, U0))
    elif mode is SplittingScheme.LDU:
        parts = ((PartTag.STRICT_LOWER, L0), (PartTag.DIAGONAL, D), (PartTag.STRICT_UPPER, U0))
    elif mode is SplittingScheme.JACOBI:
        parts = ((PartTag.DIAGONAL, D), (PartTag.OFF_DIAGONAL, L0 + U0))
    elif mode is SplittingScheme.SKEW_UPPER:
        parts = ((PartTag.LIE, L0 - L0.T), (PartTag.UPPER, D + U0 + L0.T))
    elif mode is SplittingScheme.SKEW_LOWER:
        parts = ((PartTag.LIE, U0 - U0.T), (PartTag.LOWER, D + L0 + U0.T))
    elif mode is SplittingScheme.IWASAWA:
        parts = ((PartTag.LIE, L0 - L0.T), (PartTag.DIAGONAL, D), (PartTag.STRICT_UPPER, U0 + L0.T))
    else:
        n = A.shape[0]
        # Tr(A)/n keeps the traceless part in sl(n)
        trace_part = (np.trace(A) / n) * np.eye(n)
        parts = ((PartTag.TRACE, trace_part), (PartTag.TRACELESS, A - trace_part))
    return Splitting(mode, parts)


@dataclass(frozen=True)
class KroneckerSum:
    """M = A (x) I + I (x) B, with a matrix-free apply in row-major vec order."""
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A = as_square(self.A, "A")
        B = as_square(self.B, "B")
        if A.shape != B.shape:
            raise DimensionMismatch(f"A is {A.shape} but B is {B.shape}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def matrix(self) -> np.ndarray:
        eye = np.eye(self.n)
        return np.kron(self.A, eye) + np.kron(eye, self.B)

    def apply(self, x) -> np.ndarray:
        """M x in O(n^3): reshape x to X (n x n), return vec(A X + X B^T)."""
        X = as_vector(x, self.n * self.n, "x").reshape(self.n, self.n)
        return (self.A @ X + X @ self.B.T).ravel()


def kronecker_sum(A, B) -> np.ndarray:
    """Explicit n^2 x n^2 Kronecker sum A (x) I + I (x) B."""
    return KroneckerSum(A, B).matrix()


def kron_sum_factors(M, subspace_rel: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Recover (A, B) from M = A (x) I + I (x) B with the gauge Tr(B) = 0.

    Block (i, j) of M is A_ij I + delta_ij B, so A_ij is the block trace
    divided by n and B is the traceless mean of the diagonal blocks.

    Raises:
        NotAKroneckerSum: M is further than subspace_rel * ||M||_F from the
            reconstructed Kronecker sum.
    """
    M = as_square(M, "M")
    N = M.shape[0]
    n = int(round(np.sqrt(N)))
    if n * n != N:
        raise DimensionMismatch(f"M has size {N}, which is not a perfect square")

    blocks = M.reshape(n, n, n, n)  # blocks[i, :, j, :] is block (i, j)
    A = np.einsum("iaja->ij", blocks) / n
    mean_diag = np.einsum("iaib->ab", blocks) / n
    B = mean_diag - (np.trace(mean_diag) / n) * np.eye(n)

    rel = pick(subspace_rel, get_config().splittings.kron_subspace_rel)
    residual = fro(kronecker_sum(A, B) - M)
    threshold = rel * fro(M)
    if residual > threshold:
        raise NotAKroneckerSum(residual, threshold)
    return A, B


def kronecker_split(M, subspace_rel: Optional[float] = None) -> Splitting:
    """Split M into A (x) I (left_factor) and I (x) B (right_factor), Tr(B) = 0."""
    A, B = kron_sum_factors(M, subspace_rel)
    eye = np.eye(A.shape[0])
    return Splitting(
        SplittingScheme.KRONECKER_SUM,
        ((PartTag.LEFT_FACTOR, np.kron(A, eye)), (PartTag.RIGHT_FACTOR, np.kron(eye, B))),
    )
