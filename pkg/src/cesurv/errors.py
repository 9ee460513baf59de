"""Exception taxonomy shared across the package.

Invalid inputs (bad shapes, unloadable files) map to CLI exit code 2;
numerical failures (non-convergence, undefined metrics, degenerate
likelihoods) map to exit code 3.
"""

__all__ = [
    "CesurvError",
    "InvalidInputError",
    "DatasetLoadError",
    "NumericalError",
    "NoEventsError",
    "NonConvergenceError",
    "UndefinedMetricError",
]


class CesurvError(Exception):
    """Base class for all package errors."""


class InvalidInputError(CesurvError):
    """Arguments or data violate a documented precondition."""


class DatasetLoadError(InvalidInputError):
    """A dataset file is missing columns or contains unusable values."""


class NumericalError(CesurvError):
    """A computation failed for numerical or degeneracy reasons."""


class NoEventsError(NumericalError):
    """All observations censored: the AFT likelihood has no maximum."""


class NonConvergenceError(NumericalError):
    """Optimizer could not make progress; carries diagnostics."""

    def __init__(self, message, iterations=None, gradient_norm=None):
        super().__init__(message)
        self.iterations = iterations
        self.gradient_norm = gradient_norm


class UndefinedMetricError(NumericalError):
    """Metric has an empty denominator (no events / no comparable pairs)."""
