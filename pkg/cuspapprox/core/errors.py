"""
Error Hierarchy

Input problems derive from ValueError, certification failures from
RuntimeError. Both carry structured details for machine-readable reports.
"""

from typing import Any, Dict


class CuspApproxError(Exception):
    """Base class for all package errors."""

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a JSON-ready diagnostic."""
        payload: Dict[str, Any] = {"error": self.__class__.__name__, "message": self.message}
        payload.update(self.details)
        return payload


class InvalidArgumentError(CuspApproxError, ValueError):
    """Bad operand: zero divisor, unsupported ring, unparsable text."""


class NotRationalLineError(CuspApproxError, ValueError):
    """The element fixes infinity, so it defines no rational line."""


class NoAxisError(CuspApproxError, ValueError):
    """Parabolic element: tr² = 4."""


class AxisThroughInfinityError(CuspApproxError, ValueError):
    """The axis is vertical (c = 0), its height is unbounded."""


class NotHyperbolicError(CuspApproxError, ValueError):
    """Elliptic element where a hyperbolic or loxodromic one is required."""


class OutOfDomainError(CuspApproxError, ValueError):
    """Parameters outside the validity range of a closed formula."""


class RequiresCurveChangeError(CuspApproxError, ValueError):
    """Fenchel-Nielsen point outside the reduced wedge after symmetries."""


class CertificationError(CuspApproxError, RuntimeError):
    """A computation could not certify its own output."""


class IncompleteComplexError(CertificationError):
    """The enumerated spheres leave part of the boundary uncovered."""


class InsufficientBoundError(CertificationError):
    """The candidate bound was exhausted before the next step was found."""


class InconsistentBasinChainError(CertificationError):
    """A continued-sequence term failed to be integral."""


class DegenerateStepError(CertificationError):
    """A reconstruction denominator vanished."""


class EmptySearchError(CertificationError):
    """No hyperbolic element inside the search bounds."""


class ConstructionError(CertificationError):
    """A numeric group construction violated its defining relation."""
