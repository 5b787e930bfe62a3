"""Exception hierarchy for cphi.

Every error raised by the numerical modules derives from :class:`CphiError`.
None of them derives from ``ValueError``: pydantic converts ``ValueError``
raised inside validators into ``ValidationError``, and these errors must reach
the caller unchanged.
"""

from typing import Optional


class CphiError(Exception):
    """Base class for all cphi errors."""
    pass


class InvalidMultiplierError(CphiError):
    """Raised when a hyperbolic multiplier is not real and greater than 1."""
    pass


class InvalidMapError(CphiError):
    """Raised when Möbius coefficients are degenerate (ad - bc = 0)."""
    pass


class NoFixedPointsError(CphiError):
    """Raised when fixed points are requested for the identity map."""
    pass


class NotHyperbolicError(CphiError):
    """Raised when a map is required to be hyperbolic but is not."""
    pass


class DomainError(CphiError):
    """Raised when an argument lies outside the domain of an operation."""
    pass


class BudgetError(CphiError):
    """Raised when a coefficient budget or grid size is unusable."""
    pass


class NotInH2Error(CphiError):
    """Raised when a requested function does not belong to H^2."""
    pass


class FitError(CphiError):
    """Raised when a decay fit has too few usable points."""
    pass


class DivergenceError(CphiError):
    """Raised when a Laurent series is not summable at the requested lambda."""

    def __init__(self, side: str, ratio: float, message: Optional[str] = None):
        self.side = side
        self.ratio = ratio
        super().__init__(
            message or f"{side} tail diverges: geometric ratio {ratio:.6g} >= 1"
        )


class ConvergenceError(CphiError):
    """Raised when an iterative method exhausts its iteration budget."""

    def __init__(self, iterations: int, message: Optional[str] = None):
        self.iterations = iterations
        super().__init__(message or f"no convergence after {iterations} iterations")
