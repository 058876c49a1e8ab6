"""
Matrix Factorizations and the Linearization Check

Multiplicative decompositions whose tangent maps at the identity are the
splittings of liesplit.splittings: pivot-free LU/LDU, Householder QR (with
LQ and QDR forms), Newton polar, and the generalized J-polar factorization.
linearization_check factors expm(h A) for shrinking h and measures how fast
(F_i(h) - I) / h approaches the matching splitting part of A.
"""

import logging
import math
from functools import reduce
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from .config import get_config, pick
from .errors import (
    ExistenceViolated,
    FactorizationFailed,
    LiesplitError,
    NegativeRealEigenvalue,
    NoConvergence,
    NumericallySingular,
    SingularMatrix,
    ZeroLeadingMinor,
)
from .matkit import as_square, expm, fro, max_row_norm, solve_dense, sqrtm_principal
from .splittings import PartTag, Splitting, SplittingScheme, j_split, triangular_split
from .structures import AlgebraSide, BilinearStructure, check_dimension, group_residual, membership_residual

logger = logging.getLogger(__name__)


class FactorizationScheme(Enum):
    """Factorization schemes."""
    LU_DOOLITTLE = "lu_doolittle"
    LU_CROUT = "lu_crout"
    LDU = "ldu"
    QR = "qr"
    LQ = "lq"
    QDR = "qdr"
    POLAR = "polar"
    JPOLAR = "jpolar"


@dataclass(frozen=True)
class FactorizationResult:
    """Factors whose ordered product reproduces the input."""
    scheme: FactorizationScheme
    names: Tuple[str, ...]
    factors: Tuple[np.ndarray, ...]
    residual: float
    structural_residuals: Dict[str, float] = field(default_factory=dict)

    def factor(self, name: str) -> np.ndarray:
        return self.factors[self.names.index(name)]

    def product(self) -> np.ndarray:
        return reduce(np.matmul, self.factors)


def _result(scheme, A, named, structural=None) -> FactorizationResult:
    names = tuple(name for name, _ in named)
    factors = tuple(value for _, value in named)
    residual = fro(reduce(np.matmul, factors) - A)
    return FactorizationResult(scheme, names, factors, residual, dict(structural or {}))


def lu_ldu(A, form: str = "doolittle", minor_rel: Optional[float] = None) -> FactorizationResult:
    """
    LU factorization without pivoting.

    Args:
        A: Square matrix with nonvanishing leading principal minors.
        form: "doolittle" (unit L, U), "crout" (L, unit U) or "ldu".
        minor_rel: Pivot k is treated as zero when |pivot| <= minor_rel * scale.

    Raises:
        ZeroLeadingMinor: with the 1-based index of the failing pivot.
    """
    A = as_square(A)
    if form not in ("doolittle", "crout", "ldu"):
        raise ValueError(f"unknown LU form '{form}'")
    rel = pick(minor_rel, get_config().factorizations.minor_rel)
    n = A.shape[0]
    threshold = rel * max_row_norm(A)

    U = A.copy()
    L = np.eye(n)
    for k in range(n):
        pivot = U[k, k]
        if abs(pivot) <= threshold:
            raise ZeroLeadingMinor(k + 1)
        L[k + 1:, k] = U[k + 1:, k] / pivot
        U[k + 1:, k:] -= np.outer(L[k + 1:, k], U[k, k:])
        U[k + 1:, k] = 0.0
    U = np.triu(U)
    pivots = np.diag(U).copy()

    if form == "doolittle":
        return _result(FactorizationScheme.LU_DOOLITTLE, A, (("L", L), ("U", U)))

    U1 = U / pivots[:, None]
    np.fill_diagonal(U1, 1.0)
    if form == "ldu":
        return _result(FactorizationScheme.LDU, A, (("L", L), ("D", np.diag(pivots)), ("U", U1)))
    return _result(FactorizationScheme.LU_CROUT, A, (("L", L * pivots[None, :]), ("U", U1)))


def _householder_qr(A: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Householder QR with diag(R) made nonnegative."""
    n = A.shape[0]
    R = A.copy()
    Q = np.eye(n)
    for j in range(n - 1):
        x = R[j:, j]
        norm_x = float(np.linalg.norm(x))
        if norm_x == 0.0:
            continue
        alpha = -math.copysign(norm_x, x[0])
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        R[j:, :] -= 2.0 * np.outer(v, v @ R[j:, :])
        Q[:, j:] -= 2.0 * np.outer(Q[:, j:] @ v, v)
        R[j + 1:, j] = 0.0
    signs = np.where(np.diag(R) < 0.0, -1.0, 1.0)
    return Q * signs[None, :], np.triu(signs[:, None] * R)


def qr_qdr(A, form: str = "qr", singular_rel: Optional[float] = None) -> FactorizationResult:
    """
    QR family via Householder reflections, positive-diagonal convention.

    qr: A = Q R; lq: A = L Q (from the QR of A^T); qdr: A = Q D U with D
    diagonal positive and U unit upper triangular.

    Raises:
        NumericallySingular: smallest |R_kk| at or below singular_rel * ||A||_F.
    """
    A = as_square(A)
    if form not in ("qr", "lq", "qdr"):
        raise ValueError(f"unknown QR form '{form}'")
    rel = pick(singular_rel, get_config().factorizations.qr_singular_rel)

    Q, R = _householder_qr(A.T if form == "lq" else A)
    diag = np.diag(R)
    if float(np.min(diag)) <= rel * fro(A):
        raise NumericallySingular(f"min diag(R) = {np.min(diag):.3e} at scale {fro(A):.3e}")

    n = A.shape[0]
    orth = fro(Q.T @ Q - np.eye(n))
    if form == "qr":
        return _result(FactorizationScheme.QR, A, (("Q", Q), ("R", R)), {"Q": orth})
    if form == "lq":
        return _result(FactorizationScheme.LQ, A, (("L", R.T), ("Q", Q.T)), {"Q": orth})
    U1 = R / diag[:, None]
    np.fill_diagonal(U1, 1.0)
    return _result(FactorizationScheme.QDR, A, (("Q", Q), ("D", np.diag(diag)), ("U", U1)), {"Q": orth})


def polar(
    A,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> FactorizationResult:
    """
    Polar factorization A = Q P by the Newton iteration X <- (X + X^-T) / 2.

    While the orthogonality residual is large each step is Frobenius-scaled,
    which leaves the limit unchanged and cuts the iteration count for badly
    scaled A.

    Returns:
        FactorizationResult with Q orthogonal and P symmetric positive definite.
    """
    cfg = get_config().factorizations
    A = as_square(A)
    tol = pick(tol, cfg.polar_tol)
    cap = pick(max_iter, cfg.polar_max_iter)
    n = A.shape[0]
    eye = np.eye(n)

    X = A.copy()
    residual = fro(X.T @ X - eye)
    iterations = 0
    while residual > tol:
        if iterations >= cap:
            raise NoConvergence("Newton polar", cap, residual)
        try:
            X_inv_t = solve_dense(X.T, eye)
        except SingularMatrix as e:
            raise NumericallySingular(f"polar: iterate became singular ({e})") from e
        if residual > cfg.polar_scaling_until:
            gamma = math.sqrt(fro(X_inv_t) / fro(X))
            X = 0.5 * (gamma * X + X_inv_t / gamma)
        else:
            X = 0.5 * (X + X_inv_t)
        residual = fro(X.T @ X - eye)
        iterations += 1

    Q = X
    P = Q.T @ A
    P = 0.5 * (P + P.T)
    logger.debug(f"polar: n={n}, {iterations} Newton steps")
    return _result(FactorizationScheme.POLAR, A, (("Q", Q), ("P", P)), {"Q": residual})


def generalized_polar(A, J: BilinearStructure) -> FactorizationResult:
    """
    Generalized polar factorization A = Q P relative to J.

    P is the principal square root of A* A = J^-1 A^T J A (J-symmetric) and
    Q = A P^-1 preserves the form (Q^T J Q = J).

    Raises:
        ExistenceViolated: A* A has an eigenvalue on the closed negative real axis.
        NumericallySingular: A or P is singular.
    """
    A = check_dimension(A, J)
    star_product = J.inverse @ A.T @ J.matrix @ A
    try:
        P = sqrtm_principal(star_product)
    except NegativeRealEigenvalue as e:
        raise ExistenceViolated(f"A*A has eigenvalue {e.eigenvalue} on the closed negative real axis") from e
    except SingularMatrix as e:
        raise NumericallySingular(f"generalized polar: {e}") from e
    try:
        Q = solve_dense(P.T, A.T).T
    except SingularMatrix as e:
        raise NumericallySingular(f"generalized polar: P is singular ({e})") from e
    structural = {
        "Q": group_residual(Q, J),
        "P": membership_residual(P, J, AlgebraSide.JORDAN),
    }
    return _result(FactorizationScheme.JPOLAR, A, (("Q", Q), ("P", P)), structural)


class LinearizationScheme(Enum):
    """Factorizations checked against the splitting they linearize to."""
    POLAR = "polar"
    JPOLAR = "jpolar"
    QR = "qr"
    LQ = "lq"
    QDR = "qdr"
    LDU = "ldu"


# factorization -> (splitting scheme, tag of the splitting part matched by each factor)
LINEARIZATION_PAIRS: Dict[LinearizationScheme, Tuple[SplittingScheme, Tuple[PartTag, ...]]] = {
    LinearizationScheme.POLAR: (SplittingScheme.J_SPLIT, (PartTag.LIE, PartTag.JORDAN)),
    LinearizationScheme.JPOLAR: (SplittingScheme.J_SPLIT, (PartTag.LIE, PartTag.JORDAN)),
    LinearizationScheme.QR: (SplittingScheme.SKEW_UPPER, (PartTag.LIE, PartTag.UPPER)),
    LinearizationScheme.LQ: (SplittingScheme.SKEW_LOWER, (PartTag.LOWER, PartTag.LIE)),
    LinearizationScheme.QDR: (SplittingScheme.IWASAWA,
                              (PartTag.LIE, PartTag.DIAGONAL, PartTag.STRICT_UPPER)),
    LinearizationScheme.LDU: (SplittingScheme.LDU,
                              (PartTag.STRICT_LOWER, PartTag.DIAGONAL, PartTag.STRICT_UPPER)),
}


@dataclass(frozen=True)
class LinearizationReport:
    """Finite-difference comparison of factor derivatives with splitting parts."""
    factorization: LinearizationScheme
    splitting: SplittingScheme
    steps: Tuple[float, ...]
    part_tags: Tuple[PartTag, ...]
    errors: np.ndarray  # shape (len(steps), len(part_tags))
    orders: Tuple[float, ...]  # inf marks a part exact at roundoff
    structure: Optional[str] = None

    @property
    def exact_parts(self) -> Tuple[PartTag, ...]:
        return tuple(tag for tag, order in zip(self.part_tags, self.orders) if math.isinf(order))

    @property
    def fitted_order(self) -> float:
        """Smallest fitted slope over the non-exact parts."""
        return min(self.orders)

    def passed(self, min_order: Optional[float] = None) -> bool:
        return self.fitted_order >= pick(min_order, get_config().factorizations.min_order)


def _factor(scheme: LinearizationScheme, F: np.ndarray, J: Optional[BilinearStructure]):
    if scheme is LinearizationScheme.POLAR:
        return polar(F)
    if scheme is LinearizationScheme.JPOLAR:
        return generalized_polar(F, J)
    if scheme is LinearizationScheme.LDU:
        return lu_ldu(F, "ldu")
    return qr_qdr(F, scheme.value)


def _fit_slope(steps: np.ndarray, errors: np.ndarray) -> float:
    slope, _ = np.polyfit(np.log(steps), np.log(errors), 1)
    return float(slope)


def linearization_check(
    factorization: Union[LinearizationScheme, str],
    A,
    steps: Optional[Sequence[float]] = None,
    J: Optional[BilinearStructure] = None,
    exact_abs: Optional[float] = None,
) -> LinearizationReport:
    """
    Check that a splitting is the derivative of its factorization at I.

    Args:
        factorization: One of polar, jpolar, qr, lq, qdr, ldu.
        A: Direction matrix.
        steps: Strictly decreasing positive step sizes.
        J: Structure for jpolar (identity when omitted).
        exact_abs: A part whose errors stay at or below exact_abs * (1 + ||A||_F)
            for every step is reported as exact.

    Raises:
        FactorizationFailed: factoring expm(h A) failed for some h.
    """
    cfg = get_config().factorizations
    scheme = LinearizationScheme(factorization)
    A = as_square(A)
    n = A.shape[0]
    hs = np.asarray(pick(steps, cfg.linearization_steps), dtype=float)
    if hs.ndim != 1 or hs.size < 2 or np.any(hs <= 0) or np.any(np.diff(hs) >= 0):
        raise ValueError("steps must be at least two positive, strictly decreasing values")

    if scheme is LinearizationScheme.POLAR or (scheme is LinearizationScheme.JPOLAR and J is None):
        J = BilinearStructure.identity(n)
    elif scheme is not LinearizationScheme.JPOLAR:
        J = None
    split_scheme, tags = LINEARIZATION_PAIRS[scheme]
    if split_scheme is SplittingScheme.J_SPLIT:
        splitting: Splitting = j_split(A, J)
    else:
        splitting = triangular_split(A, split_scheme)
    targets = [splitting.part(tag) for tag in tags]

    eye = np.eye(n)
    errors = np.zeros((hs.size, len(tags)))
    for row, h in enumerate(hs):
        try:
            result = _factor(scheme, expm(h * A), J)
        except LiesplitError as e:
            raise FactorizationFailed(float(h), e) from e
        for col, (F, target) in enumerate(zip(result.factors, targets)):
            errors[row, col] = fro((F - eye) / h - target)

    exact_threshold = pick(exact_abs, cfg.linearization_exact_abs) * (1.0 + fro(A))
    orders = []
    for col in range(len(tags)):
        column = errors[:, col]
        if np.all(column <= exact_threshold):
            orders.append(math.inf)
        else:
            orders.append(_fit_slope(hs, np.maximum(column, np.finfo(float).tiny)))

    report = LinearizationReport(
        factorization=scheme,
        splitting=split_scheme,
        steps=tuple(float(h) for h in hs),
        part_tags=tags,
        errors=errors,
        orders=tuple(orders),
        structure=J.descriptor() if J is not None else None,
    )
    logger.info(f"linearization {scheme.value}: orders {report.orders}")
    return report
