"""Semantic exception hierarchy shared by all lorenzfit modules."""


class LorenzError(Exception):
    """Base class for all lorenzfit errors."""


class ParameterDomainError(LorenzError, ValueError):
    """Model parameters violate their domain in constrained mode."""


class CurveDomainError(LorenzError, ValueError):
    """Curve evaluated outside the unit interval or at an undefined point."""


class NegativeRadicandError(LorenzError):
    """The quadratic-form Lorenz curve has a negative radicand inside (0, 1)."""


class QuadratureError(LorenzError):
    """Adaptive quadrature exhausted its subdivision budget.

    Carries the best available estimate and the achieved error bound.
    """

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class NoSignChangeError(LorenzError):
    """Root bracketing failed: no sign change inside the bracket."""


class SeriesError(LorenzError):
    """Hypergeometric series diverges or fails to converge within budget."""


class UnsupportedFamilyError(LorenzError, ValueError):
    """Operation has no implementation for the requested curve family."""


class DatasetError(LorenzError, ValueError):
    """Grouped dataset violates its invariants or cannot be parsed."""

    def __init__(self, message, location=None):
        super().__init__(message if location is None else f"{location}: {message}")
        self.location = location


class NonMonotoneQuantileError(LorenzError):
    """Implied quantile function is not nondecreasing (non-genuine model)."""


class MeasureError(LorenzError):
    """A poverty or inequality measure is undefined for the given model."""


class FitError(LorenzError):
    """Estimation failed before an optimizer could run."""


class SimulationError(LorenzError):
    """Monte Carlo run dropped too many replications or has invalid config."""
