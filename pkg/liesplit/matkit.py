"""
Dense Linear Algebra Kernels

Pivoted solves, symmetric and general eigenvalues, the matrix exponential and
the principal matrix square root. Everything else in liesplit is built on
these. Matrices are plain float64 numpy arrays; functions never mutate their
arguments.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.linalg import LinAlgWarning

from .config import get_config, pick
from .errors import (
    DimensionMismatch,
    NegativeRealEigenvalue,
    NoConvergence,
    NonFiniteEntries,
    NotSymmetric,
    SingularMatrix,
)

logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps


def as_dense(A, name: str = "A") -> np.ndarray:
    """Validate and return `A` as a finite 2-D float64 array."""
    arr = np.asarray(A, dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteEntries(f"{name} has non-finite entries")
    return arr


def as_square(A, name: str = "A") -> np.ndarray:
    arr = as_dense(A, name)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {arr.shape}")
    return arr


def as_vector(b, n: Optional[int] = None, name: str = "b") -> np.ndarray:
    """Validate and return `b` as a finite 1-D float64 array of length n."""
    vec = np.asarray(b, dtype=float)
    if vec.ndim == 2 and 1 in vec.shape:
        vec = vec.ravel()
    if vec.ndim != 1:
        raise DimensionMismatch(f"{name} must be a vector, got shape {vec.shape}")
    if n is not None and vec.shape[0] != n:
        raise DimensionMismatch(f"{name} has length {vec.shape[0]}, expected {n}")
    if not np.all(np.isfinite(vec)):
        raise NonFiniteEntries(f"{name} has non-finite entries")
    return vec


def fro(A) -> float:
    return float(np.linalg.norm(A))


def max_row_norm(A: np.ndarray) -> float:
    return float(np.max(np.linalg.norm(A, axis=1)))


@dataclass(frozen=True)
class EigenReport:
    """Eigenvalues of a square matrix."""
    values: np.ndarray  # complex, length n
    is_symmetric_input: bool

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class LUFactor:
    """Row-pivoted LU factorization, reusable across right-hand sides."""
    lu: np.ndarray
    piv: np.ndarray

    @property
    def n(self) -> int:
        return self.lu.shape[0]

    def solve(self, B) -> np.ndarray:
        """Solve A X = B for a vector or a matrix of right-hand sides."""
        B = np.asarray(B, dtype=float)
        if B.shape[0] != self.n:
            raise DimensionMismatch(f"right-hand side has {B.shape[0]} rows, expected {self.n}")
        return scipy.linalg.lu_solve((self.lu, self.piv), B, check_finite=False)


def lu_factor(A, pivot_rel: Optional[float] = None) -> LUFactor:
    """
    Factor A with partial (row) pivoting.

    Args:
        A: Square matrix.
        pivot_rel: Pivots at or below pivot_rel * max-row-norm(A) are singular.

    Returns:
        LUFactor ready for repeated solves.

    Raises:
        SingularMatrix: first offending pivot.
    """
    A = as_square(A)
    rel = pick(pivot_rel, get_config().matkit.pivot_rel)
    threshold = rel * max_row_norm(A)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    bad = np.flatnonzero(pivots <= threshold)
    if bad.size:
        k = int(bad[0])
        raise SingularMatrix(k, float(pivots[k]), threshold)
    return LUFactor(lu=lu, piv=piv)


def solve_dense(A, B, pivot_rel: Optional[float] = None) -> np.ndarray:
    """Solve A X = B by row-pivoted elimination."""
    return lu_factor(A, pivot_rel).solve(B)


def sym_eigenvalues(
    A,
    symmetry_rel: Optional[float] = None,
    offdiag_rel: Optional[float] = None,
    max_sweeps: Optional[int] = None,
) -> EigenReport:
    """
    Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Args:
        A: Symmetric matrix (symmetrized internally).
        symmetry_rel: Allowed ||A - A^T||_F relative to ||A||_F.
        offdiag_rel: Stop once the off-diagonal norm is below this times ||A||_F.
        max_sweeps: Sweep cap.

    Returns:
        EigenReport with real values in ascending order.
    """
    cfg = get_config().matkit
    A = as_square(A)
    norm_a = fro(A)
    asym = fro(A - A.T)
    if asym > pick(symmetry_rel, cfg.symmetry_rel) * norm_a:
        raise NotSymmetric(f"||A - A^T||_F = {asym:.3e} relative to ||A||_F = {norm_a:.3e}")

    W = 0.5 * (A + A.T)
    n = W.shape[0]
    target = pick(offdiag_rel, cfg.jacobi_offdiag_rel) * norm_a
    sweeps = pick(max_sweeps, cfg.jacobi_max_sweeps)

    for sweep in range(sweeps + 1):
        off = fro(W - np.diag(np.diag(W)))
        if off <= target:
            break
        if sweep == sweeps:
            raise NoConvergence("cyclic Jacobi", sweeps, off)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = W[p, q]
                if apq == 0.0:
                    continue
                theta = (W[q, q] - W[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                col_p = W[:, p].copy()
                col_q = W[:, q].copy()
                W[:, p] = c * col_p - s * col_q
                W[:, q] = s * col_p + c * col_q
                row_p = W[p, :].copy()
                row_q = W[q, :].copy()
                W[p, :] = c * row_p - s * row_q
                W[q, :] = s * row_p + c * row_q
                W[p, q] = W[q, p] = 0.0

    values = np.sort(np.diag(W)).astype(complex)
    return EigenReport(values=values, is_symmetric_input=True)


def _wilkinson_shift(B: np.ndarray) -> complex:
    a, b, c, d = B[-2, -2], B[-2, -1], B[-1, -2], B[-1, -1]
    half_tr = 0.5 * (a + d)
    disc = np.sqrt(half_tr * half_tr - (a * d - b * c))
    mu1, mu2 = half_tr + disc, half_tr - disc
    return mu1 if abs(mu1 - d) < abs(mu2 - d) else mu2


def _qr_step(B: np.ndarray, mu: complex) -> None:
    """One shifted QR step on a complex upper-Hessenberg block, in place."""
    m = B.shape[0]
    B[np.diag_indices(m)] -= mu
    rotations = []
    for k in range(m - 1):
        x, y = B[k, k], B[k + 1, k]
        r = math.hypot(abs(x), abs(y))
        c, s = (1.0 + 0j, 0j) if r == 0.0 else (x / r, y / r)
        row_k = B[k, k:].copy()
        row_k1 = B[k + 1, k:].copy()
        B[k, k:] = np.conj(c) * row_k + np.conj(s) * row_k1
        B[k + 1, k:] = -s * row_k + c * row_k1
        rotations.append((c, s))
    for k, (c, s) in enumerate(rotations):
        col_k = B[:k + 2, k].copy()
        col_k1 = B[:k + 2, k + 1].copy()
        B[:k + 2, k] = c * col_k + s * col_k1
        B[:k + 2, k + 1] = -np.conj(s) * col_k + np.conj(c) * col_k1
    B[np.diag_indices(m)] += mu


def eigenvalues_general(
    A,
    sweeps_per_n: Optional[int] = None,
    max_n: Optional[int] = None,
) -> EigenReport:
    """
    All eigenvalues of a square matrix.

    Hessenberg reduction followed by Wilkinson-shifted QR sweeps with
    deflation on small subdiagonal entries. Values are sorted by (real, imag).
    """
    cfg = get_config().matkit
    A = as_square(A)
    n = A.shape[0]
    limit = pick(max_n, cfg.eig_max_n)
    if n > limit:
        raise DimensionMismatch(f"eigenvalues_general supports n <= {limit}, got {n}")

    symmetric = bool(np.array_equal(A, A.T))
    H = scipy.linalg.hessenberg(A).astype(complex)
    scale = max(fro(H), np.finfo(float).tiny)
    cap = pick(sweeps_per_n, cfg.qr_sweeps_per_n) * n

    eigs = []
    hi = n - 1
    sweeps = 0
    since_deflation = 0
    while hi >= 0:
        lo = hi
        while lo > 0:
            neighbourhood = abs(H[lo - 1, lo - 1]) + abs(H[lo, lo])
            if neighbourhood == 0.0:
                neighbourhood = scale
            if abs(H[lo, lo - 1]) <= _EPS * neighbourhood:
                H[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eigs.append(H[hi, hi])
            hi -= 1
            since_deflation = 0
            continue
        if sweeps >= cap:
            raise NoConvergence("shifted QR", sweeps)
        block = H[lo:hi + 1, lo:hi + 1]
        if since_deflation and since_deflation % 10 == 0:
            # exceptional shift
            mu = block[-1, -1] + 0.75 * abs(block[-1, -2])
        else:
            mu = _wilkinson_shift(block)
        _qr_step(block, mu)
        sweeps += 1
        since_deflation += 1

    values = np.array(eigs, dtype=complex)
    if symmetric:
        values = values.real.astype(complex)
    order = np.lexsort((values.imag, values.real))
    logger.debug(f"eigenvalues_general: n={n}, {sweeps} QR sweeps")
    return EigenReport(values=values[order], is_symmetric_input=symmetric)


def spectral_radius(A) -> float:
    return eigenvalues_general(A).spectral_radius


def expm(A, scaled_norm: Optional[float] = None, terms: Optional[int] = None) -> np.ndarray:
    """
    Matrix exponential by scaling and squaring.

    A is scaled by 2^-s so its Frobenius norm is at most `scaled_norm`, the
    truncated Taylor series is summed in Horner form, then squared s times.
    """
    cfg = get_config().matkit
    A = as_square(A)
    limit = pick(scaled_norm, cfg.expm_scaled_norm)
    k_max = pick(terms, cfg.expm_terms)
    n = A.shape[0]

    norm_a = fro(A)
    s = 0
    if norm_a > limit:
        s = max(0, int(math.ceil(math.log2(norm_a / limit))))
    X = A / (2.0 ** s)

    identity = np.eye(n)
    E = identity.copy()
    for k in range(k_max, 0, -1):
        E = identity + (X @ E) / k
    for _ in range(s):
        E = E @ E
    return E


def sqrtm_principal(
    A,
    residual_rel: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> np.ndarray:
    """
    Principal square root by the Denman-Beavers iteration.

    Args:
        A: Square matrix with no eigenvalue on the closed negative real axis.
        residual_rel: Required ||X^2 - A||_F / ||A||_F.
        max_iter: Iteration cap.

    Returns:
        X with X @ X ~= A and spectrum in the open right half-plane.

    Raises:
        NegativeRealEigenvalue: spectrum touches (-inf, 0].
        NoConvergence: cap reached.
    """
    cfg = get_config().matkit
    A = as_square(A)
    tol = pick(residual_rel, cfg.sqrtm_residual_rel)
    cap = pick(max_iter, cfg.sqrtm_max_iter)
    n = A.shape[0]
    norm_a = fro(A)

    values = eigenvalues_general(A).values
    scale = max(1.0, float(np.max(np.abs(values))))
    axis = cfg.negative_axis_rel * scale
    for lam in values:
        if abs(lam.imag) <= axis and lam.real <= axis:
            raise NegativeRealEigenvalue(complex(lam))

    identity = np.eye(n)
    Y, Z = A.copy(), identity.copy()
    residual = fro(Y @ Y - A)
    for it in range(1, cap + 1):
        Y_inv = solve_dense(Y, identity)
        Z_inv = solve_dense(Z, identity)
        Y_next = 0.5 * (Y + Z_inv)
        Z = 0.5 * (Z + Y_inv)
        step = fro(Y_next - Y)
        Y = Y_next
        residual = fro(Y @ Y - A)
        if residual <= 0.1 * tol * norm_a or step <= 10.0 * _EPS * fro(Y):
            break
    else:
        raise NoConvergence("Denman-Beavers", cap, residual / max(norm_a, _EPS))

    # one Newton polish
    Y = 0.5 * (Y + solve_dense(Y, A))
    residual = fro(Y @ Y - A)
    if residual > tol * norm_a:
        raise NoConvergence("Denman-Beavers", it, residual / norm_a)

    if np.array_equal(A, A.T):
        Y = 0.5 * (Y + Y.T)
    logger.debug(f"sqrtm_principal: n={n}, {it} iterations, residual {residual:.2e}")
    return Y
