"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI:
  2 - configuration / usage errors
  3 - numeric infeasibility (rank ambiguity, coincident classes, ...)
  4 - I/O failures
"""


class QuatQuadError(Exception):
    """Base class for all package errors."""


class NonFiniteError(QuatQuadError):
    """A quaternion coordinate became NaN or infinite."""


class ZeroInverseError(QuatQuadError, ZeroDivisionError):
    """Inverse of the zero quaternion was requested."""


class ParseError(QuatQuadError, ValueError):
    """Malformed quaternion literal."""


class ConjugationAssemblyError(QuatQuadError):
    """Companion quartic coefficients came out with non-real residue.

    The four coefficients are assembled from quaternion products that
    must cancel to reals; a residue above tolerance means the inputs
    are corrupt.
    """


class CoincidentClassesError(QuatQuadError):
    """Prescribed roots share a congruence class; the two-point
    construction is undefined there."""


class SingularDerivativeError(QuatQuadError):
    """|P'(q)| below the singularity threshold."""


class SingularHalleyDeltaError(QuatQuadError):
    """|P'(q) - P(q) P'(q)^-1| below the singularity threshold."""


class SingularStencilError(QuatQuadError):
    """A finite-difference stencil point hit a singular step."""


class NonConvergenceError(QuatQuadError):
    """Iterative solver failed to meet its residual contract."""


class PreconditionViolatedError(QuatQuadError, ValueError):
    """Caller violated a documented numeric precondition."""


class RankAmbiguousError(QuatQuadError):
    """Eigenvalue magnitudes do not split cleanly into vanishing and
    non-vanishing pairs; refusing to orient an invariant plane."""


class ConfigError(QuatQuadError, ValueError):
    """Malformed configuration file."""
