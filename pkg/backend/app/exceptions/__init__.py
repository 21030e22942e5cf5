"""Custom exceptions package."""
from typing import Any


class ShiftCompactnessError(Exception):
    """Base class for every error raised by the toolkit."""


class ContractViolation(ShiftCompactnessError, ValueError):
    """A caller broke an operation's precondition."""


class InvalidRule(ContractViolation):
    """Weight rule data is malformed (zero weight, empty period, ...)."""


class NotInvertible(ContractViolation):
    """An inverse was requested for a shift whose weights are not bounded below."""


class PreconditionViolated(ContractViolation):
    """Numeric arguments fall outside an operation's admissible range."""


class ComponentError(ShiftCompactnessError):
    """A component could not produce a trustworthy result."""


class ChainViolation(ComponentError):
    """The ordering chain between spectral quantities failed beyond tolerance."""

    def __init__(self, message: str, n: int | None = None, gap: float | None = None):
        super().__init__(message)
        self.n = n
        self.gap = gap


class NoConvergence(ComponentError):
    """An iterative norm estimate exhausted its iteration budget."""

    def __init__(self, message: str, last_estimate: float | None = None):
        super().__init__(message)
        self.last_estimate = last_estimate


class DegenerateSpectrum(ComponentError):
    """The spectral radius estimate is zero, so the full spectrum has no interior."""


class HypothesisUnmet(ComponentError):
    """The orbit bound ‖Wⁿe_k‖ ≤ cⁿ keeps failing near the end of the horizon."""

    def __init__(self, message: str, last_violation: int | None = None):
        super().__init__(message)
        self.last_violation = last_violation


class CertificateViolated(ComponentError):
    """A sampled polynomial left the ε-neighbourhood of the approximating subspace."""

    def __init__(self, message: str, polynomial: Any = None, residual: float | None = None):
        super().__init__(message)
        self.polynomial = polynomial
        self.residual = residual


class BoundViolated(ComponentError):
    """A coefficient exceeded the Cauchy estimate |a_n| ≤ d⁻ⁿ."""

    def __init__(self, message: str, degree: int | None = None, margin: float | None = None):
        super().__init__(message)
        self.degree = degree
        self.margin = margin


class VerdictConflict(ComponentError):
    """Two rules reached opposite conclusions for the same subject."""
