"""Exception types shared across the package."""

from __future__ import annotations


class FamaLabError(Exception):
    """Base class for all package-specific errors."""


class DomainError(FamaLabError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class SingularCorrelationError(FamaLabError, ValueError):
    """Some |mu_k| equals 1, so the 1/(1 - mu_k^2) factors blow up."""


class ExactCapError(FamaLabError, ValueError):
    """Exact evaluator requested beyond its port cap; carries the cap."""

    def __init__(self, message: str, cap: int):
        super().__init__(message)
        self.cap = cap


class QuadratureError(FamaLabError, ArithmeticError):
    """Node-doubling failed to validate the requested tolerance."""


class PrecisionLossError(FamaLabError, ArithmeticError):
    """Alternating-sum cancellation exceeded the trusted digit budget;
    carries the estimated number of decimal digits lost."""

    def __init__(self, message: str, lost_digits: float):
        super().__init__(message)
        self.lost_digits = lost_digits


class ResolutionExceededError(FamaLabError, ValueError):
    """Envelope-inverse target below the tabulated peaks; carries the cap."""

    def __init__(self, message: str, cap: float):
        super().__init__(message)
        self.cap = cap


class InfeasibleDesignError(FamaLabError):
    """A design target cannot be met.  Structured: carries the reason and
    the closest achievable value so CLI sweeps can tabulate the cell."""

    def __init__(self, reason: str, closest: float | None = None):
        super().__init__(reason)
        self.reason = reason
        self.closest = closest
