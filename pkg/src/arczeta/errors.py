"""Semantic exception hierarchy shared by all modules."""


class ArczetaError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(ArczetaError, ValueError):
    """Input violates a structural contract (shape, ordering, congruence)."""


class InadmissibleParameterError(ArczetaError, ValueError):
    """Parameter is well-formed but outside the validity domain of the closed forms."""


class PoleError(ArczetaError, ArithmeticError):
    """A closed-form denominator factor vanishes.

    Carries the offending linear factor so callers can report which
    constraint was hit.
    """

    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class ConvergenceError(ArczetaError, ValueError):
    """Requested numerical integral does not converge, or sits too close to a pole."""


class BoundaryError(ArczetaError, ValueError):
    """Point too close to the boundary of the bounded domain for stable evaluation."""
