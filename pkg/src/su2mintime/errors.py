"""Exception types raised across the package."""


class Su2Error(Exception):
    """Base class for all package errors."""


class NormalizationError(Su2Error, ValueError):
    """(alpha, beta) is too far from the unit sphere to be an SU(2) element."""


class RangeError(Su2Error, ValueError):
    """A frequency or time lies outside the range allowed for a branch."""


class DegenerateError(Su2Error, ValueError):
    """A quantity is undefined for the given parameters (e.g. gamma1 == 0)."""


class EmptyLocus(Su2Error):
    """The optimality-truncated front line is empty at the requested time."""


class Unreachable(Su2Error):
    """A target was not reached before the search horizon."""

    def __init__(self, message, tau_max=None):
        super().__init__(message)
        self.tau_max = tau_max


class NotFound(Su2Error):
    """The brute-force oracle found no hit before its horizon."""


class StepError(Su2Error):
    """Integrator unitarity drift exceeded its tolerance (step too large)."""


class ConfigError(Su2Error, ValueError):
    """Malformed run configuration."""
