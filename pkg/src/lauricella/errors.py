"""Exception types shared across the library."""

__all__ = [
    "LauricellaError",
    "DomainError",
    "ParamError",
    "SingularParamError",
    "TruncationError",
    "SamplingError",
]


class LauricellaError(Exception):
    """Base class for all library-specific errors."""


class DomainError(LauricellaError, ValueError):
    """Evaluation point lies outside the convergence domain."""


class ParamError(LauricellaError, ValueError):
    """Parameter vector violates a precondition (wrong length, pole, ...)."""


class SingularParamError(ParamError):
    """A series-form operator expansion hit a pole in its denominator.

    The diagonal (gamma-ratio) form of the operator may still be defined;
    only the printed series expansion is singular at this binding.
    """


class TruncationError(LauricellaError):
    """Summation failed to converge within the allowed number of terms."""


class SamplingError(LauricellaError):
    """No admissible test point/binding found under the given constraints."""
