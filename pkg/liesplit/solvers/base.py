"""
Shared solver plumbing: configuration, reports, the stationary loop, and
factoring shifted matrices once per solve.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..config import get_config, pick
from ..errors import NoConvergence, SingularMatrix, SingularShift
from ..matkit import LUFactor, as_vector, lu_factor, spectral_radius
from ..monitoring import get_metrics

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    """
    Iteration parameters.

    alpha None means "choose automatically" (optimal alpha where the method
    has one, else the configured default). tol and max_iter fall back to the
    defaults table.
    """
    alpha: Optional[float] = None
    tol: Optional[float] = None
    max_iter: Optional[int] = None
    x0: Optional[np.ndarray] = None
    force: bool = False
    estimate_rho: bool = False

    def __post_init__(self):
        defaults = get_config().solvers
        object.__setattr__(self, "tol", float(pick(self.tol, defaults.tol)))
        object.__setattr__(self, "max_iter", int(pick(self.max_iter, defaults.max_iter)))
        if self.alpha is not None and not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")

    def initial_guess(self, n: int) -> np.ndarray:
        if self.x0 is None:
            return np.zeros(n)
        return as_vector(self.x0, n, "x0").copy()

    def alpha_or_default(self) -> float:
        return self.alpha if self.alpha is not None else get_config().solvers.default_alpha


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one solver run. residual_history[0] is the initial residual."""
    solution: np.ndarray
    iterations: int
    residual_history: Tuple[float, ...]
    converged: bool
    method: str
    rho_estimate: Optional[float] = None
    alpha: Optional[float] = None
    bound: Optional[float] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def final_residual(self) -> float:
        return self.residual_history[-1]

    def raise_for_status(self) -> "SolveReport":
        """Raise NoConvergence unless the run converged."""
        if not self.converged:
            raise NoConvergence(self.method, self.iterations, self.final_residual)
        return self


def relative_residual(apply_A: Callable[[np.ndarray], np.ndarray], b: np.ndarray) -> Callable[[np.ndarray], float]:
    """||b - A x||_2 / ||b||_2, or the absolute residual when b = 0."""
    b_norm = float(np.linalg.norm(b))
    scale = b_norm if b_norm > 0.0 else 1.0

    def residual(x: np.ndarray) -> float:
        return float(np.linalg.norm(b - apply_A(x))) / scale

    return residual


def iterate(
    sweep: Callable[[np.ndarray], np.ndarray],
    residual: Callable[[np.ndarray], float],
    x0: np.ndarray,
    cfg: SolverConfig,
) -> Tuple[np.ndarray, List[float], bool, int]:
    """
    Run x <- sweep(x) until residual(x) <= cfg.tol or cfg.max_iter sweeps.

    Returns:
        (x, residual history, converged, sweeps taken)
    """
    x = x0
    history = [residual(x)]
    iterations = 0
    with np.errstate(over="ignore", invalid="ignore"):
        while history[-1] > cfg.tol and iterations < cfg.max_iter:
            x = sweep(x)
            iterations += 1
            history.append(residual(x))
            if not np.isfinite(history[-1]):
                logger.warning(f"iteration diverged after {iterations} sweeps")
                break
    return x, history, bool(history[-1] <= cfg.tol), iterations


def estimate_spectral_radius(n: int, iteration_matrix: Callable[[], np.ndarray]) -> Optional[float]:
    """
    Spectral radius of iteration_matrix(), or None when the explicit matrix
    would be larger than the dense eigenvalue solver accepts (matkit.eig_max_n).
    """
    limit = get_config().matkit.eig_max_n
    if n > limit:
        logger.info(f"spectral radius not estimated: iteration matrix order {n} exceeds {limit}")
        return None
    return spectral_radius(iteration_matrix())


def factor_shifted(M: np.ndarray, alpha: float, label: str) -> LUFactor:
    """Factor M + alpha I once for reuse across iterations."""
    shifted = M + alpha * np.eye(M.shape[0])
    try:
        return lu_factor(shifted, get_config().solvers.shift_pivot_rel)
    except SingularMatrix as e:
        raise SingularShift(f"{label} + {alpha:g} I is singular ({e})") from e


def finish(report: SolveReport) -> SolveReport:
    """Log and record a finished run."""
    if report.converged:
        logger.info(
            f"{report.method}: converged in {report.iterations} iterations, "
            f"residual {report.final_residual:.3e}"
        )
    else:
        logger.warning(
            f"{report.method}: not converged after {report.iterations} iterations, "
            f"residual {report.final_residual:.3e}"
        )
    get_metrics().record_solve(
        report.method, report.iterations, report.converged,
        report.final_residual, report.rho_estimate,
    )
    return report
