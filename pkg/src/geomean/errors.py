"""Error types shared across the package.

Every numerical routine raises a structured error instead of returning NaN,
so a bad evaluation can never silently corrupt a descent trace.
"""


class GeomeanError(Exception):
    """Base class for all package errors."""


class DomainError(GeomeanError, ValueError):
    """An argument is outside the mathematical domain of the function."""


class CutLocusError(GeomeanError):
    """A logarithm was requested at (or within tolerance of) the cut locus.

    The distance function is not differentiable there, so descent cannot
    continue.  `index` identifies the offending data point when known.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DegenerateSecantError(GeomeanError, ValueError):
    """Secant configuration is degenerate (undefined intersection)."""


class PreconditionError(GeomeanError, ValueError):
    """A policy or solver precondition is violated (e.g. rho too large)."""
