"""
Stationary Splitting Iterations

STS (skew-symmetric plus triangular), ADI on Kronecker sums, and the
classical Jacobi and Gauss-Seidel methods. Each one is x <- M^-1 (N x + b)
for some splitting A = M - N, possibly alternated between two splittings.
"""

import logging
from enum import Enum
from typing import Optional, Union

import numpy as np
import scipy.linalg

from ..config import get_config, pick
from ..errors import DimensionMismatch, SingularShift, ZeroDiagonal
from ..matkit import LUFactor, as_square, as_vector, sym_eigenvalues
from ..splittings import KroneckerSum, PartTag, SplittingScheme, triangular_split
from .base import (
    SolveReport,
    SolverConfig,
    estimate_spectral_radius,
    factor_shifted,
    finish,
    iterate,
    relative_residual,
)

logger = logging.getLogger(__name__)


class Direction(Enum):
    UPPER = "upper"
    LOWER = "lower"


class ClassicalMethod(Enum):
    JACOBI = "jacobi"
    GAUSS_SEIDEL_FORWARD = "gauss_seidel_forward"
    GAUSS_SEIDEL_BACKWARD = "gauss_seidel_backward"


def sts_parts(A, direction: Union[Direction, str] = Direction.UPPER):
    """
    (triangular part, skew part, is_lower) of the STS splitting.

    upper: U = D + U0 + L0^T, S = L0 - L0^T
    lower: L = D + L0 + U0^T, S = U0 - U0^T
    """
    direction = Direction(direction)
    if direction is Direction.UPPER:
        split = triangular_split(A, SplittingScheme.SKEW_UPPER)
        return split.part(PartTag.UPPER), split.part(PartTag.LIE), False
    split = triangular_split(A, SplittingScheme.SKEW_LOWER)
    return split.part(PartTag.LOWER), split.part(PartTag.LIE), True


def kellogg_contraction(U, alpha: float) -> float:
    """||(alpha I - U)(alpha I + U)^-1||_2; below 1 when U + U^T is positive definite."""
    U = as_square(U, "U")
    eye = np.eye(U.shape[0])
    try:
        cayley = scipy.linalg.solve((alpha * eye + U).T, (alpha * eye - U).T).T
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
        raise SingularShift(f"alpha I + U is singular ({e})") from e
    return float(np.linalg.norm(cayley, 2))


def sts_iteration_matrix(A, alpha: float, direction: Union[Direction, str] = Direction.UPPER) -> np.ndarray:
    """(alpha I + S)^-1 (alpha I - T)(alpha I + T)^-1 (alpha I - S) with T the triangular part."""
    T, S, _ = sts_parts(A, direction)
    eye = np.eye(T.shape[0])
    f_t = factor_shifted(T, alpha, "T")
    f_s = factor_shifted(S, alpha, "S")
    return f_s.solve((alpha * eye - T) @ f_t.solve(alpha * eye - S))


def sts_solve(
    A,
    b,
    cfg: Optional[SolverConfig] = None,
    direction: Union[Direction, str] = Direction.UPPER,
) -> SolveReport:
    """
    Skew-symmetric/triangular splitting iteration.

    Half-steps: (alpha I + T) x_half = (alpha I - S) x + b by triangular
    substitution, then (alpha I + S) x_next = (alpha I - T) x_half + b.
    Positive definiteness of (A + A^T)/2 is checked and reported in details;
    it is not required to run.
    """
    cfg = cfg or SolverConfig()
    A = as_square(A)
    n = A.shape[0]
    b = as_vector(b, n)
    direction = Direction(direction)
    alpha = cfg.alpha_or_default()
    T, S, lower = sts_parts(A, direction)

    shifted_t = T + alpha * np.eye(n)
    if np.any(np.diag(shifted_t) == 0.0):
        raise SingularShift(f"alpha I + T has a zero diagonal entry at alpha={alpha:g}")
    f_s = factor_shifted(S, alpha, "S")

    lambda_min = float(sym_eigenvalues(0.5 * (A + A.T)).real[0])
    positive_definite = lambda_min > get_config().solvers.definiteness_rel * float(np.linalg.norm(A))
    if not positive_definite:
        logger.warning(f"sts: (A + A^T)/2 is not positive definite (lambda_min = {lambda_min:.3e})")
    logger.info(f"sts-{direction.value}: n={n}, alpha={alpha:.6g}")

    def sweep(x: np.ndarray) -> np.ndarray:
        half = scipy.linalg.solve_triangular(
            shifted_t, alpha * x - S @ x + b, lower=lower, check_finite=False
        )
        return f_s.solve(alpha * half - T @ half + b)

    x, history, converged, iterations = iterate(
        sweep, relative_residual(lambda x: A @ x, b), cfg.initial_guess(n), cfg
    )
    rho = None
    if cfg.estimate_rho:
        rho = estimate_spectral_radius(n, lambda: sts_iteration_matrix(A, alpha, direction))
    report = SolveReport(
        solution=x,
        iterations=iterations,
        residual_history=tuple(history),
        converged=converged,
        method=f"sts-{direction.value}",
        rho_estimate=rho,
        alpha=alpha,
        bound=kellogg_contraction(T, alpha),
        details={"positive_definite": positive_definite, "lambda_min_sym": lambda_min},
    )
    return finish(report)


def kron_shift_solve(
    A,
    alpha: float,
    R,
    side: str = "left",
    factor: Optional[LUFactor] = None,
) -> np.ndarray:
    """
    Solve a Kronecker-shifted system in matrix form.

    side="left":  (alpha I + A (x) I) vec(X) = vec(R)  <=>  (alpha I + A) X = R
    side="right": (alpha I + I (x) A) vec(X) = vec(R)  <=>  X (alpha I + A)^T = R
    with row-major vec. R may be an n x n matrix or a vector of length n^2.
    `factor`, when given, is a factorization of alpha I + A to reuse.
    """
    A = as_square(A)
    n = A.shape[0]
    R = np.asarray(R, dtype=float).reshape(n, n)
    f = factor if factor is not None else factor_shifted(A, alpha, "A")
    if side == "left":
        return f.solve(R)
    if side == "right":
        return f.solve(R.T).T
    raise ValueError(f"side must be 'left' or 'right', got '{side}'")


def adi_iteration_matrix(A, B, alpha: float, max_n: Optional[int] = None) -> np.ndarray:
    """
    Explicit ADI iteration matrix (validation scale only):
    (alpha I + I (x) B)^-1 (alpha I - A (x) I)(alpha I + A (x) I)^-1 (alpha I - I (x) B).
    """
    op = KroneckerSum(A, B)
    max_n = pick(max_n, get_config().solvers.adi_explicit_max_n)
    if op.n > max_n:
        raise DimensionMismatch(f"explicit ADI iteration matrix limited to n <= {max_n}")
    n = op.n
    eye_n = np.eye(n)
    eye = np.eye(n * n)
    left = np.kron(op.A, eye_n)
    right = np.kron(eye_n, op.B)
    inner = scipy.linalg.solve(alpha * eye + left, alpha * eye - right)
    return scipy.linalg.solve(alpha * eye + right, (alpha * eye - left) @ inner)


def adi_solve(A, B, b, cfg: Optional[SolverConfig] = None) -> SolveReport:
    """
    ADI iteration for (A (x) I + I (x) B) x = b.

    Each half-step is n shifted n x n solves sharing one factorization; the
    n^2 x n^2 matrix is never formed.
    """
    cfg = cfg or SolverConfig()
    op = KroneckerSum(A, B)
    n = op.n
    limit = get_config().solvers.adi_max_n
    if n > limit:
        raise DimensionMismatch(f"adi_solve supports n <= {limit}, got {n}")
    b = as_vector(b, n * n)
    Bmat = b.reshape(n, n)
    alpha = cfg.alpha_or_default()
    f_a = factor_shifted(op.A, alpha, "A")
    f_b = factor_shifted(op.B, alpha, "B")
    logger.info(f"adi: n={n} (system size {n * n}), alpha={alpha:.6g}")

    def sweep(x: np.ndarray) -> np.ndarray:
        X = x.reshape(n, n)
        X_half = kron_shift_solve(op.A, alpha, alpha * X - X @ op.B.T + Bmat, "left", factor=f_a)
        R = alpha * X_half - op.A @ X_half + Bmat
        return kron_shift_solve(op.B, alpha, R, "right", factor=f_b).ravel()

    x, history, converged, iterations = iterate(
        sweep, relative_residual(op.apply, b), cfg.initial_guess(n * n), cfg
    )
    rho = None
    if cfg.estimate_rho and n <= get_config().solvers.adi_explicit_max_n:
        rho = estimate_spectral_radius(n * n, lambda: adi_iteration_matrix(op.A, op.B, alpha))
    report = SolveReport(
        solution=x,
        iterations=iterations,
        residual_history=tuple(history),
        converged=converged,
        method="adi",
        rho_estimate=rho,
        alpha=alpha,
        details={"n": n},
    )
    return finish(report)


def classical_splitting(A, method: Union[ClassicalMethod, str]):
    """(M, N, lower) with A = M - N; lower tells which triangle M occupies."""
    method = ClassicalMethod(method)
    if method is ClassicalMethod.JACOBI:
        split = triangular_split(A, SplittingScheme.JACOBI)
        return split.part(PartTag.DIAGONAL), -split.part(PartTag.OFF_DIAGONAL), True
    if method is ClassicalMethod.GAUSS_SEIDEL_FORWARD:
        split = triangular_split(A, SplittingScheme.CROUT)
        return split.part(PartTag.LOWER), -split.part(PartTag.STRICT_UPPER), True
    split = triangular_split(A, SplittingScheme.DOOLITTLE)
    return split.part(PartTag.UPPER), -split.part(PartTag.STRICT_LOWER), False


def classical_solve(
    A,
    b,
    method: Union[ClassicalMethod, str] = ClassicalMethod.JACOBI,
    cfg: Optional[SolverConfig] = None,
) -> SolveReport:
    """
    Jacobi or Gauss-Seidel iteration x <- M^-1 (N x + b).

    rho_estimate is the spectral radius of M^-1 N whenever n is within the
    dense eigenvalue limit (matkit.eig_max_n), else None.

    Raises:
        ZeroDiagonal: A has a zero diagonal entry.
    """
    cfg = cfg or SolverConfig()
    A = as_square(A)
    n = A.shape[0]
    b = as_vector(b, n)
    method = ClassicalMethod(method)
    zeros = np.flatnonzero(np.diag(A) == 0.0)
    if zeros.size:
        raise ZeroDiagonal(int(zeros[0]))
    M, N, lower = classical_splitting(A, method)

    def solve_m(rhs: np.ndarray) -> np.ndarray:
        return scipy.linalg.solve_triangular(M, rhs, lower=lower, check_finite=False)

    rho = estimate_spectral_radius(n, lambda: solve_m(N))
    logger.info(f"{method.value}: n={n}, rho={rho}")

    x, history, converged, iterations = iterate(
        lambda x: solve_m(N @ x + b), relative_residual(lambda x: A @ x, b), cfg.initial_guess(n), cfg
    )
    report = SolveReport(
        solution=x,
        iterations=iterations,
        residual_history=tuple(history),
        converged=converged,
        method=method.value,
        rho_estimate=rho,
    )
    return finish(report)
