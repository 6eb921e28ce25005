"""Exception hierarchy shared by all mpspectra modules."""

from __future__ import annotations


class MPSpectraError(Exception):
    """Base class for every error raised by this package."""


class DomainError(MPSpectraError, ValueError):
    """An argument lies outside the domain of the operation."""


class SpecError(MPSpectraError, ValueError):
    """An ensemble description violates its invariants."""


class ConfigError(MPSpectraError, ValueError):
    """An experiment configuration failed validation.

    ``key`` names the offending field when one can be identified.
    """

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message if key is None else f"{key}: {message}")
        self.key = key


class CapacityError(MPSpectraError, MemoryError):
    """A requested matrix exceeds the supported size."""


class NumericalError(MPSpectraError, ArithmeticError):
    """A numerical kernel failed to produce a trustworthy answer."""


class ConvergenceError(NumericalError):
    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(f"{message} (residual={residual:.3e} after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations


class UnsupportedEnsembleError(MPSpectraError, ValueError):
    """The ensemble kind does not support the requested estimator."""


class InsufficientDataError(MPSpectraError, ValueError):
    pass


class CacheFormatError(MPSpectraError, ValueError):
    """A binary eigenvalue cache file is malformed."""
