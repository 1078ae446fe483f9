"""Exception hierarchy shared by all quadzeta modules."""

from __future__ import annotations


class QuadZetaError(Exception):
    """Base class for library errors."""


class DomainError(QuadZetaError, ValueError):
    """Argument outside the region where a quantity is defined."""


class NotFundamental(DomainError):
    """Integer is not a fundamental discriminant."""


class ParityError(DomainError):
    """Parity of the argument does not match the parity of the character."""


class ResourceError(QuadZetaError):
    """Request exceeds a configured size cap."""


class PrecisionInsufficient(QuadZetaError):
    """Working precision is too low to resolve the requested quantity."""


class InternalInconsistency(QuadZetaError, ArithmeticError):
    """Two independent computations of the same quantity disagree."""
