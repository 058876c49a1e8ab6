"""
Restarted GMRES with optional right preconditioning.

Arnoldi with modified Gram-Schmidt, least-squares problem updated by Givens
rotations. The preconditioner is any callable v -> M^-1 v; passing (J, alpha)
uses the J-HSS preconditioner.
"""

import logging
import math
from typing import Callable, Optional, Tuple, Union

import numpy as np
import scipy.linalg

from ..config import get_config, pick
from ..errors import Breakdown
from ..matkit import as_square, as_vector
from ..structures import BilinearStructure
from .base import SolveReport, SolverConfig, finish
from .jhss import JHSSPreconditioner, optimal_alpha

logger = logging.getLogger(__name__)

Preconditioner = Union[Callable[[np.ndarray], np.ndarray], Tuple[BilinearStructure, Optional[float]]]


def _resolve_preconditioner(A: np.ndarray, precond: Optional[Preconditioner]):
    if precond is None:
        return None, None
    if callable(precond):
        return precond, None
    J, alpha = precond
    if alpha is None:
        alpha = optimal_alpha(A, J)
    return JHSSPreconditioner(A, J, alpha), float(alpha)


def gmres_preconditioned(
    A,
    b,
    precond: Optional[Preconditioner] = None,
    restart: Optional[int] = None,
    cfg: Optional[SolverConfig] = None,
) -> SolveReport:
    """
    Solve A x = b by restarted GMRES, right-preconditioned.

    Args:
        A: Square matrix.
        b: Right-hand side.
        precond: None, a callable applying M^-1, or (J, alpha) for the J-HSS
            preconditioner (alpha None means optimal alpha).
        restart: Krylov dimension per cycle.
        cfg: tol, max_iter (total inner iterations) and x0.

    Returns:
        SolveReport; iterations counts inner (Arnoldi) steps. Non-convergence
        is reported, not raised (see SolveReport.raise_for_status).

    Raises:
        Breakdown: the Hessenberg column vanished entirely (singular A).
    """
    cfg = cfg or SolverConfig()
    A = as_square(A)
    n = A.shape[0]
    b = as_vector(b, n)
    m = min(pick(restart, get_config().solvers.gmres_restart), n)
    if m < 1:
        raise ValueError(f"restart must be positive, got {restart}")
    apply_m, alpha = _resolve_preconditioner(A, precond)
    precondition = apply_m if apply_m is not None else (lambda v: v)
    method = "gmres" if apply_m is None else "gmres-preconditioned"

    b_norm = float(np.linalg.norm(b))
    scale = b_norm if b_norm > 0.0 else 1.0
    x = cfg.initial_guess(n)
    r = b - A @ x
    beta = float(np.linalg.norm(r))
    history = [beta / scale]
    total = 0
    converged = history[-1] <= cfg.tol

    while not converged and total < cfg.max_iter:
        V = np.zeros((n, m + 1))
        H = np.zeros((m + 1, m))
        g = np.zeros(m + 1)
        cs = np.zeros(m)
        sn = np.zeros(m)
        V[:, 0] = r / beta
        g[0] = beta
        k = 0
        for j in range(m):
            w = A @ precondition(V[:, j])
            for i in range(j + 1):
                H[i, j] = V[:, i] @ w
                w = w - H[i, j] * V[:, i]
            H[j + 1, j] = float(np.linalg.norm(w))
            happy = H[j + 1, j] <= np.finfo(float).eps * float(np.linalg.norm(H[:j + 1, j]))
            if not happy:
                V[:, j + 1] = w / H[j + 1, j]

            for i in range(j):
                upper = cs[i] * H[i, j] + sn[i] * H[i + 1, j]
                H[i + 1, j] = -sn[i] * H[i, j] + cs[i] * H[i + 1, j]
                H[i, j] = upper
            denom = math.hypot(H[j, j], H[j + 1, j])
            if denom == 0.0:
                raise Breakdown(f"GMRES breakdown at inner step {total + 1}")
            cs[j] = H[j, j] / denom
            sn[j] = H[j + 1, j] / denom
            H[j, j] = denom
            H[j + 1, j] = 0.0
            g[j + 1] = -sn[j] * g[j]
            g[j] = cs[j] * g[j]

            total += 1
            k = j + 1
            history.append(abs(g[j + 1]) / scale)
            logger.debug(f"gmres step {total}: estimated residual {history[-1]:.3e}")
            if history[-1] <= cfg.tol or happy or total >= cfg.max_iter:
                break

        y = scipy.linalg.solve_triangular(H[:k, :k], g[:k], check_finite=False)
        x = x + precondition(V[:, :k] @ y)
        r = b - A @ x
        beta = float(np.linalg.norm(r))
        history[-1] = beta / scale
        converged = history[-1] <= cfg.tol
        if beta == 0.0:
            break

    report = SolveReport(
        solution=x,
        iterations=total,
        residual_history=tuple(history),
        converged=converged,
        method=method,
        alpha=alpha,
        details={"restart": m},
    )
    return finish(report)
