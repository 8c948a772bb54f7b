"""Exception types shared across the package."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge.

    Carries the best available estimate so callers can decide whether the
    partial result is still usable.
    """

    def __init__(self, message, value=None, err_est=None):
        super().__init__(message)
        self.value = value
        self.err_est = err_est


class TruncationError(RuntimeError):
    """A series could not be truncated within the configured term cap."""

    def __init__(self, message, partial_mass=None, terms_used=None):
        super().__init__(message)
        self.partial_mass = partial_mass
        self.terms_used = terms_used


class MomentUndefinedError(ValueError):
    """A requested moment does not exist for the given degrees of freedom."""
