"""
J-HSS Iteration

Alternating iteration built on the Lie-Jordan splitting A = S + H relative to
a structure J. Each half-step works with the shifted matrices HJ + alpha I
and SJ + alpha I (one symmetric, one skew-symmetric) and maps back through J,
so the iteration is standard HSS on A J y = b with x = J y.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..config import get_config, pick
from ..errors import DimensionMismatch, NotPositiveDefinite, WellDefinednessViolated
from ..matkit import as_square, as_vector, fro, solve_dense, spectral_radius, sym_eigenvalues
from ..structures import BilinearStructure, check_dimension
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

Callback = Callable[[int, np.ndarray], None]


def shifted_parts(A, J: BilinearStructure) -> Tuple[np.ndarray, np.ndarray]:
    """
    Return (HJ, SJ) for the Lie-Jordan splitting of A.

    With X = A J, HJ = (X + sign X^T) / 2 and SJ = (X - sign X^T) / 2, so one
    is exactly symmetric and the other exactly skew-symmetric.
    """
    A = check_dimension(A, J)
    X = A @ J.matrix
    HJ = 0.5 * (X + J.sign * X.T)
    SJ = 0.5 * (X - J.sign * X.T)
    return HJ, SJ


def definite_factor(A, J: BilinearStructure) -> Tuple[str, np.ndarray]:
    """The factor that must be positive definite: HJ for symmetric J, SJ for skew J."""
    HJ, SJ = shifted_parts(A, J)
    return ("HJ", HJ) if J.is_symmetric else ("SJ", SJ)


def _spectrum(F: np.ndarray) -> np.ndarray:
    return sym_eigenvalues(F).real


def _is_definite(values: np.ndarray, F: np.ndarray, rel: Optional[float]) -> bool:
    rel = pick(rel, get_config().solvers.definiteness_rel)
    return float(values[0]) > rel * fro(F)


def contraction_bound(values: Sequence[float], alpha: float) -> float:
    """max |alpha - lambda| / |alpha + lambda| over the given eigenvalues."""
    values = np.asarray(values, dtype=float)
    with np.errstate(divide="ignore"):
        return float(np.max(np.abs(alpha - values) / np.abs(alpha + values)))


def optimal_alpha(A, J: BilinearStructure, definiteness_rel: Optional[float] = None) -> float:
    """
    alpha* = sqrt(lambda_min * lambda_max) of the definite factor.

    Raises:
        NotPositiveDefinite: the definite factor is not positive definite.
    """
    name, F = definite_factor(A, J)
    values = _spectrum(F)
    if not _is_definite(values, F, definiteness_rel):
        raise NotPositiveDefinite(f"{name} has lambda_min = {values[0]:.3e}")
    return math.sqrt(float(values[0]) * float(values[-1]))


class IterationAnalysis(NamedTuple):
    T: np.ndarray
    rho: float
    bound: float


def _iteration_matrix(HJ: np.ndarray, SJ: np.ndarray, J: BilinearStructure, alpha: float) -> np.ndarray:
    eye = np.eye(J.n)
    f_h = factor_shifted(HJ, alpha, "HJ")
    f_s = factor_shifted(SJ, alpha, "SJ")
    T_y = f_s.solve((alpha * eye - HJ) @ f_h.solve(alpha * eye - SJ))
    return J.matrix @ T_y @ J.inverse


def iteration_analysis(A, J: BilinearStructure, alpha: float) -> IterationAnalysis:
    """
    Explicit iteration matrix, its spectral radius and the contraction bound.

    T = (alpha I + JS)^-1 (alpha I - JH)(JH + alpha I)^-1 (alpha I - JS), formed
    as J T_y J^-1 with T_y the same product in HJ and SJ.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    HJ, SJ = shifted_parts(A, J)
    T = _iteration_matrix(HJ, SJ, J, alpha)
    _, F = definite_factor(A, J)
    return IterationAnalysis(T=T, rho=spectral_radius(T), bound=contraction_bound(_spectrum(F), alpha))


class SweepRow(NamedTuple):
    alpha: float
    rho: float
    bound: float


def alpha_sweep(
    A,
    J: BilinearStructure,
    alphas: Sequence[float],
    max_workers: Optional[int] = None,
) -> List[SweepRow]:
    """Evaluate (alpha, rho, bound) for each alpha, concurrently, in input order."""

    def evaluate(alpha: float) -> SweepRow:
        analysis = iteration_analysis(A, J, float(alpha))
        return SweepRow(float(alpha), analysis.rho, analysis.bound)

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(evaluate, alphas))


def alpha_grid(alpha_star: float, low: Optional[float] = None, high: Optional[float] = None,
               points: Optional[int] = None) -> np.ndarray:
    """Log-spaced grid over [low, high] * alpha_star (default 41 points, 1e-2..1e2)."""
    cfg = get_config().cli
    low = pick(low, cfg.alpha_grid_low)
    high = pick(high, cfg.alpha_grid_high)
    points = pick(points, cfg.alpha_grid_points)
    return alpha_star * np.logspace(math.log10(low), math.log10(high), points)


class JHSSPreconditioner:
    """
    P_alpha^-1 = 2 alpha J (SJ + alpha I)^-1 (HJ + alpha I)^-1.

    Both shifted matrices are factored once on construction.
    """

    def __init__(self, A, J: BilinearStructure, alpha: float):
        if not alpha > 0:
            raise ValueError(f"alpha must be positive, got {alpha}")
        self.J = J
        self.alpha = float(alpha)
        self.HJ, self.SJ = shifted_parts(A, J)
        self._f_h = factor_shifted(self.HJ, self.alpha, "HJ")
        self._f_s = factor_shifted(self.SJ, self.alpha, "SJ")

    def apply(self, v) -> np.ndarray:
        v = as_vector(v, self.J.n, "v")
        return 2.0 * self.alpha * (self.J.matrix @ self._f_s.solve(self._f_h.solve(v)))

    __call__ = apply

    def explicit(self) -> np.ndarray:
        """P_alpha = (HJ + alpha I)(SJ + alpha I) J^-1 / (2 alpha)."""
        eye = np.eye(self.J.n)
        return (self.HJ + self.alpha * eye) @ (self.SJ + self.alpha * eye) @ self.J.inverse / (2.0 * self.alpha)


def apply_preconditioner(A, J: BilinearStructure, alpha: float, v) -> np.ndarray:
    return JHSSPreconditioner(A, J, alpha).apply(v)


def _alternate(
    first: np.ndarray,
    second: np.ndarray,
    b: np.ndarray,
    alpha: float,
    cfg: SolverConfig,
    lift: Callable[[np.ndarray], np.ndarray],
    y0: np.ndarray,
    residual: Callable[[np.ndarray], float],
    labels: Tuple[str, str],
    callback: Optional[Callback],
):
    """
    y_half = (first + aI)^-1 ((aI - second) y + b)
    y_next = (second + aI)^-1 ((aI - first) y_half + b)
    """
    f_first = factor_shifted(first, alpha, labels[0])
    f_second = factor_shifted(second, alpha, labels[1])
    step = [0]

    def sweep(y: np.ndarray) -> np.ndarray:
        half = f_first.solve(alpha * y - second @ y + b)
        y_next = f_second.solve(alpha * half - first @ half + b)
        step[0] += 1
        if callback is not None:
            callback(step[0], lift(y_next))
        return y_next

    y, history, converged, iterations = iterate(sweep, lambda y: residual(lift(y)), y0, cfg)
    return lift(y), history, converged, iterations


def j_hss_solve(
    A,
    b,
    J: BilinearStructure,
    cfg: Optional[SolverConfig] = None,
    callback: Optional[Callback] = None,
) -> SolveReport:
    """
    Solve A x = b by the J-HSS iteration.

    Args:
        A: Square matrix matching J.
        b: Right-hand side.
        J: Bilinear structure.
        cfg: Solver parameters; alpha None selects optimal_alpha when the
            definite factor is positive definite, else the default alpha.
        callback: Called as callback(k, x_k) after every full step.

    Raises:
        WellDefinednessViolated: the definite factor (HJ for symmetric J, SJ
            for skew J) is not positive definite and cfg.force is off.
        SingularShift: a shifted matrix is singular.
    """
    cfg = cfg or SolverConfig()
    A = check_dimension(A, J)
    n = J.n
    b = as_vector(b, n)
    HJ, SJ = shifted_parts(A, J)
    name, F = ("HJ", HJ) if J.is_symmetric else ("SJ", SJ)
    values = _spectrum(F)
    definite = _is_definite(values, F, None)
    if not definite:
        message = f"{name} is not positive definite (lambda_min = {values[0]:.3e})"
        if not cfg.force:
            raise WellDefinednessViolated(message)
        logger.warning(f"{message}; running anyway, convergence is not guaranteed")

    if cfg.alpha is not None:
        alpha = cfg.alpha
    elif definite:
        alpha = math.sqrt(float(values[0]) * float(values[-1]))
    else:
        alpha = cfg.alpha_or_default()
    logger.info(f"j-hss: n={n}, J={J.descriptor()}, alpha={alpha:.6g}")

    x0 = cfg.initial_guess(n)
    x, history, converged, iterations = _alternate(
        HJ, SJ, b, alpha, cfg,
        lift=lambda y: J.matrix @ y,
        y0=J.inverse @ x0,
        residual=relative_residual(lambda x: A @ x, b),
        labels=("HJ", "SJ"),
        callback=callback,
    )
    rho = None
    if cfg.estimate_rho:
        rho = estimate_spectral_radius(n, lambda: _iteration_matrix(HJ, SJ, J, alpha))
    report = SolveReport(
        solution=x,
        iterations=iterations,
        residual_history=tuple(history),
        converged=converged,
        method="j-hss",
        rho_estimate=rho,
        alpha=alpha,
        bound=contraction_bound(values, alpha),
        details={
            "structure": J.descriptor(),
            "definite_factor": name,
            "lambda_min": float(values[0]),
            "lambda_max": float(values[-1]),
            "well_defined": definite,
        },
    )
    return finish(report)


def hss_solve(
    C,
    b,
    cfg: Optional[SolverConfig] = None,
    skew_first: bool = False,
    callback: Optional[Callback] = None,
) -> SolveReport:
    """
    Standard HSS iteration on C x = b with H = (C + C^T)/2, S = (C - C^T)/2.

    The symmetric half-step comes first unless skew_first is set. alpha None
    selects sqrt(lambda_min * lambda_max) of H when H is positive definite.
    """
    cfg = cfg or SolverConfig()
    C = as_square(C, "C")
    n = C.shape[0]
    b = as_vector(b, n)
    H = 0.5 * (C + C.T)
    S = 0.5 * (C - C.T)
    values = _spectrum(H)
    definite = _is_definite(values, H, None)
    if cfg.alpha is not None:
        alpha = cfg.alpha
    elif definite:
        alpha = math.sqrt(float(values[0]) * float(values[-1]))
    else:
        alpha = cfg.alpha_or_default()

    first, second = (S, H) if skew_first else (H, S)
    labels = ("S", "H") if skew_first else ("H", "S")
    x, history, converged, iterations = _alternate(
        first, second, b, alpha, cfg,
        lift=lambda y: y,
        y0=cfg.initial_guess(n),
        residual=relative_residual(lambda x: C @ x, b),
        labels=labels,
        callback=callback,
    )
    rho = None
    if cfg.estimate_rho:
        identity = BilinearStructure.identity(n)
        rho = estimate_spectral_radius(n, lambda: _iteration_matrix(H, S, identity, alpha))
    report = SolveReport(
        solution=x,
        iterations=iterations,
        residual_history=tuple(history),
        converged=converged,
        method="hss",
        rho_estimate=rho,
        alpha=alpha,
        bound=contraction_bound(values, alpha),
        details={"skew_first": skew_first, "well_defined": definite},
    )
    return finish(report)


def pseudo_skew_schur_solve(A, p: int, alpha: float, rhs) -> np.ndarray:
    """
    Solve (SJ + alpha I) z = rhs for J = I_{p,q} through a p x p Schur complement.

    With A = [[A11, B], [C, D]], C = B^T and D = D^T, the shifted matrix is
    [[K + alpha I, -B], [B^T, alpha I]] with K = (A11 - A11^T)/2, and
    u solves (K + alpha I + B B^T / alpha) u = f + B g / alpha.
    """
    A = as_square(A)
    n = A.shape[0]
    if not 0 < p < n:
        raise DimensionMismatch(f"need 0 < p < n, got p={p}, n={n}")
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    rhs = as_vector(rhs, n, "rhs")
    A11, B = A[:p, :p], A[:p, p:]
    C, D = A[p:, :p], A[p:, p:]
    scale = max(fro(A), 1.0)
    if fro(C - B.T) > 1e-12 * scale or fro(D - D.T) > 1e-12 * scale:
        raise ValueError("Schur reduction needs C = B^T and D = D^T")

    f, g = rhs[:p], rhs[p:]
    K = 0.5 * (A11 - A11.T)
    schur = K + alpha * np.eye(p) + (B @ B.T) / alpha
    u = solve_dense(schur, f + (B @ g) / alpha)
    v = (g - B.T @ u) / alpha
    return np.concatenate([u, v])
