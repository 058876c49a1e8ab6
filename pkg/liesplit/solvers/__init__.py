"""
Splitting-based iterative solvers.

J-HSS and HSS, restarted GMRES with the J-HSS preconditioner, STS, ADI and
the classical Jacobi / Gauss-Seidel methods, plus iteration-matrix analysis.
"""

from .base import SolveReport, SolverConfig
from .jhss import (
    IterationAnalysis,
    JHSSPreconditioner,
    SweepRow,
    alpha_grid,
    alpha_sweep,
    apply_preconditioner,
    contraction_bound,
    definite_factor,
    hss_solve,
    iteration_analysis,
    j_hss_solve,
    optimal_alpha,
    pseudo_skew_schur_solve,
    shifted_parts,
)
from .krylov import gmres_preconditioned
from .stationary import (
    ClassicalMethod,
    Direction,
    adi_iteration_matrix,
    adi_solve,
    classical_solve,
    kellogg_contraction,
    kron_shift_solve,
    sts_iteration_matrix,
    sts_parts,
    sts_solve,
)

__all__ = [
    'SolverConfig',
    'SolveReport',
    'IterationAnalysis',
    'JHSSPreconditioner',
    'SweepRow',
    'alpha_grid',
    'alpha_sweep',
    'apply_preconditioner',
    'contraction_bound',
    'definite_factor',
    'hss_solve',
    'iteration_analysis',
    'j_hss_solve',
    'optimal_alpha',
    'pseudo_skew_schur_solve',
    'shifted_parts',
    'gmres_preconditioned',
    'ClassicalMethod',
    'Direction',
    'adi_iteration_matrix',
    'adi_solve',
    'classical_solve',
    'kellogg_contraction',
    'kron_shift_solve',
    'sts_iteration_matrix',
    'sts_parts',
    'sts_solve',
]
