"""Exception types raised by cvsep.

Everything derives from :class:`CvsepError`, which itself derives from
``ValueError`` so that generic callers can catch input problems without
importing this module.
"""


class CvsepError(ValueError):
    """Base class for all cvsep errors."""


class NonFiniteError(CvsepError):
    """Input contains NaN or infinity."""


class NotSymmetricError(CvsepError):
    """Matrix expected to be symmetric is not, beyond tolerance."""


class SingularMatrixError(CvsepError):
    """Matrix is singular (or numerically indistinguishable from singular)."""


class NotSPDError(CvsepError):
    """Matrix expected to be symmetric positive definite is not."""


class MalformedHermitianError(CvsepError):
    """Real/imaginary part pair does not describe a Hermitian matrix."""


class NotSymplecticError(CvsepError):
    """Matrix fails the symplectic-membership test."""


class NotPhysicalError(CvsepError):
    """Covariance matrix violates the uncertainty principle."""


class NegativeDetCError(CvsepError):
    """Operation requires det C >= 0 but the cross block has det C < 0."""


class StateFileError(CvsepError):
    """State file is malformed or uses an unsupported convention."""
