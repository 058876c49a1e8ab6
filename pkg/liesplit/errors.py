"""
Exception hierarchy for liesplit.

Every failure raised by the library derives from LiesplitError so callers
(and the CLI exit-code mapping) can catch the whole family at once. Errors
that describe a bad argument also derive from ValueError.
"""

from typing import Optional


class LiesplitError(Exception):
    """Base class for all liesplit errors."""


class DimensionMismatch(LiesplitError, ValueError):
    """Operand shapes are incompatible."""


class NonFiniteEntries(LiesplitError, ValueError):
    """A matrix or vector contains NaN or Inf."""


class NotSymmetric(LiesplitError, ValueError):
    """Input expected to be symmetric is not, within tolerance."""


class InvalidStructure(LiesplitError, ValueError):
    """A custom J is not exactly symmetric or skew-symmetric."""


class NotAKroneckerSum(LiesplitError, ValueError):
    """Matrix does not lie in the Kronecker-sum subspace."""

    def __init__(self, residual: float, threshold: float):
        self.residual = residual
        self.threshold = threshold
        super().__init__(
            f"Kronecker-sum residual {residual:.3e} exceeds {threshold:.3e}"
        )


class ManifestError(LiesplitError, ValueError):
    """A run manifest references missing or inconsistent inputs."""


class SingularMatrix(LiesplitError):
    """A pivot fell below the singularity threshold during elimination."""

    def __init__(self, index: int, pivot: float, threshold: float):
        self.index = index
        self.pivot = pivot
        self.threshold = threshold
        super().__init__(
            f"pivot {index} has magnitude {pivot:.3e} <= {threshold:.3e}"
        )


class SingularCustomJ(LiesplitError):
    """A custom bilinear structure matrix is not invertible."""


class NoConvergence(LiesplitError):
    """An iteration hit its cap before meeting its tolerance."""

    def __init__(self, what: str, iterations: int, residual: Optional[float] = None):
        self.what = what
        self.iterations = iterations
        self.residual = residual
        detail = f", last residual {residual:.3e}" if residual is not None else ""
        super().__init__(f"{what} did not converge in {iterations} iterations{detail}")


class NegativeRealEigenvalue(LiesplitError):
    """Matrix has an eigenvalue on the closed negative real axis."""

    def __init__(self, eigenvalue: complex):
        self.eigenvalue = eigenvalue
        super().__init__(f"eigenvalue {eigenvalue} lies on the closed negative real axis")


class ZeroLeadingMinor(LiesplitError):
    """Pivot-free elimination met a vanishing leading principal minor."""

    def __init__(self, k: int):
        self.k = k
        super().__init__(f"leading principal minor {k} vanishes; LU needs a permutation")


class NumericallySingular(LiesplitError):
    """Matrix is singular at working precision for the requested factorization."""


class ExistenceViolated(LiesplitError):
    """The generalized polar factorization does not exist for this input."""


class FactorizationFailed(LiesplitError):
    """Factoring expm(h*A) failed during a linearization check."""

    def __init__(self, h: float, cause: Exception):
        self.h = h
        self.cause = cause
        super().__init__(f"factorization failed at h={h:g}: {type(cause).__name__}: {cause}")


class WellDefinednessViolated(LiesplitError):
    """The definite factor of a J-HSS problem is not positive definite."""


class SingularShift(LiesplitError):
    """A shifted half-step matrix is singular."""


class NotPositiveDefinite(LiesplitError):
    """Matrix expected to be symmetric positive definite is not."""


class Breakdown(LiesplitError):
    """Krylov iteration broke down without reaching the solution."""


class ZeroDiagonal(LiesplitError):
    """A stationary method needs a nonzero diagonal."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"diagonal entry {index} is zero")


class ParseError(LiesplitError):
    """Malformed Matrix Market input."""

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class UnsupportedField(LiesplitError):
    """Matrix Market header names a format this reader does not handle."""
