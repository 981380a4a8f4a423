"""Exception types raised across the library.

Numeric failure modes are separated from plain domain violations so that
callers (and the CLI) can map them onto distinct exit codes.
"""


class BesselHarmonicError(Exception):
    """Base class for all library-specific errors."""


class DomainError(BesselHarmonicError, ValueError):
    """A precondition on the inputs is violated."""


class PoleError(DomainError):
    """Evaluation requested at a pole (e.g. Gamma at a non-positive integer)."""


class DiagonalError(DomainError):
    """A kernel that is singular on the diagonal was requested at x = y."""


class NonHolderInput(DomainError):
    """Principal-value integration requested at a point where the input
    fails the local Holder/boundedness probe (e.g. at a jump)."""


class NumericalError(BesselHarmonicError, ArithmeticError):
    """Base class for numeric failures (tolerance, convergence, overflow)."""


class OverflowSignal(NumericalError):
    """The requested unscaled quantity exceeds the representable range."""


class NonConvergence(NumericalError):
    """No available representation met the requested tolerance."""


class ConditioningError(NumericalError):
    """Inputs are too ill-conditioned for the requested evaluation
    (e.g. a hypergeometric argument within rounding distance of 1)."""


class ToleranceNotMet(NumericalError):
    """Quadrature finished but the achieved error exceeds the request.

    Carries the best estimate so callers can decide to proceed anyway.
    """

    def __init__(self, message, best=None, achieved_error=None):
        super().__init__(message)
        self.best = best
        self.achieved_error = achieved_error


class TailDominates(ToleranceNotMet):
    """The analytic tail bound of a semi-infinite integral exceeds the
    absolute tolerance, so the finite-grid value is not trustworthy."""


class TruncationInsufficient(NumericalError):
    """A spectral integral was truncated before its tail fell below
    tolerance."""


class DivergenceSignal(NumericalError):
    """An integral that is expected to converge (after compensation)
    was detected to diverge."""


class UnderResolvedWarning(UserWarning):
    """A grid-based estimate (sup over a grid, distribution function)
    may be under-resolved."""
