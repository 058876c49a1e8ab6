"""
liesplit

Dense linear algebra around matrix splittings: Lie/Jordan structure of a
bilinear form J, the additive splittings built from it and from matrix
patterns, the factorizations those splittings linearize, and the
splitting-based iterative solvers (J-HSS, HSS, STS, ADI, Jacobi,
Gauss-Seidel, preconditioned GMRES).
"""

from .config import LiesplitConfig, get_config
from .errors import LiesplitError
from .factorizations import (
    FactorizationResult,
    FactorizationScheme,
    LinearizationReport,
    generalized_polar,
    linearization_check,
    lu_ldu,
    polar,
    qr_qdr,
)
from .matkit import EigenReport, eigenvalues_general, expm, solve_dense, sqrtm_principal, sym_eigenvalues
from .mmio import read_matrix_market, write_matrix_market
from .splittings import (
    KroneckerSum,
    PartTag,
    Splitting,
    SplittingScheme,
    j_split,
    kron_sum_factors,
    kronecker_split,
    kronecker_sum,
    triangular_split,
)
from .structures import (
    AlgebraSide,
    BilinearStructure,
    StructureKind,
    j_adjoint,
    membership_residual,
    projector_dimension,
    realize,
)
from .solvers import (
    SolveReport,
    SolverConfig,
    adi_solve,
    apply_preconditioner,
    classical_solve,
    gmres_preconditioned,
    j_hss_solve,
    optimal_alpha,
    sts_solve,
)

__version__ = "0.1.0"

__all__ = [
    'LiesplitConfig',
    'get_config',
    'LiesplitError',
    'FactorizationResult',
    'FactorizationScheme',
    'LinearizationReport',
    'generalized_polar',
    'linearization_check',
    'lu_ldu',
    'polar',
    'qr_qdr',
    'EigenReport',
    'eigenvalues_general',
    'expm',
    'solve_dense',
    'sqrtm_principal',
    'sym_eigenvalues',
    'read_matrix_market',
    'write_matrix_market',
    'KroneckerSum',
    'PartTag',
    'Splitting',
    'SplittingScheme',
    'j_split',
    'kron_sum_factors',
    'kronecker_split',
    'kronecker_sum',
    'triangular_split',
    'AlgebraSide',
    'BilinearStructure',
    'StructureKind',
    'j_adjoint',
    'membership_residual',
    'projector_dimension',
    'realize',
    'SolveReport',
    'SolverConfig',
    'adi_solve',
    'apply_preconditioner',
    'classical_solve',
    'gmres_preconditioned',
    'j_hss_solve',
    'optimal_alpha',
    'sts_solve',
]
