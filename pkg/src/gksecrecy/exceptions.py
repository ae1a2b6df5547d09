"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


class UnsupportedParametersError(ValueError):
    """A parameter combination the numerical kernels cannot handle.

    Raised e.g. when no Mellin-Barnes contour can separate the pole sets of
    a Meijer-G integrand, or for the asymptotic formula at k1 == m1.
    """


class PrecisionError(RuntimeError):
    """A numerical routine could not reach the requested accuracy.

    Carries the best available partial result and an error estimate so
    callers can decide whether to proceed anyway.
    """

    def __init__(self, message, partial=None, error_estimate=None):
        super().__init__(message)
        self.partial = partial
        self.error_estimate = error_estimate


class ConsistencyError(RuntimeError):
    """Two routes to the same quantity disagree beyond roundoff scale.

    Signals a probable bug (series or quadrature), not accumulation noise;
    never silently clamped away.
    """
