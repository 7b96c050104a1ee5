"""Exception types raised by the library.

Every error derives from :class:`SipError` so callers (and the batch driver)
can catch the whole family at once.
"""


class SipError(Exception):
    """Base class for all library errors."""


class DomainError(SipError, ValueError):
    """A coordinate or argument lies outside the admissible open interval."""


class ParamError(SipError, ValueError):
    """A parameter set violates the entry's schema."""


class PhaseError(SipError):
    """The requested operation is not defined in the current SUSY phase."""


class RangeError(SipError, ValueError):
    """A level index or limit parameter is outside the supported range."""


class IndeterminateSign(SipError):
    """The sign of W at a domain edge did not stabilise."""


class NotApplicable(SipError):
    """The operation does not apply to this kind of superpotential."""


class NoTurningPoints(SipError):
    """Fewer than two turning points were found.

    ``count`` is the number of sign changes seen on the scan mesh.
    """

    def __init__(self, message: str, count: int = 0):
        super().__init__(message)
        self.count = count


class MoreThanTwoRoots(SipError):
    """The radicand changes sign more than twice on the scan mesh."""

    def __init__(self, message: str, count: int):
        super().__init__(message)
        self.count = count


class DegenerateInterval(SipError, ValueError):
    """Turning points coincide (e.g. the unbroken ground state)."""


class NonConvergence(SipError):
    """Quadrature failed to reach the requested tolerance."""


class NegativeIntegrand(SipError):
    """The radicand is significantly negative inside the integration range."""


class BracketFailure(SipError):
    """A root-finding bracket could not be established."""


class InsufficientBoundStates(SipError):
    """The potential supports fewer bound states than requested."""


class GridTooCoarse(SipError):
    """Eigenvalues did not converge under grid refinement."""


class PoleError(SipError, ZeroDivisionError):
    """Evaluation hit a pole of a rational superpotential term."""
