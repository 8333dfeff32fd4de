from __future__ import annotations


EXIT_OK = 0
EXIT_PARSE_ERROR = 2
EXIT_VALIDATION_ERROR = 3
EXIT_NUMERIC_DOMAIN_ERROR = 4


class GravDephaseError(RuntimeError):
    exit_code: int = 1


class NumericDomainError(GravDephaseError, ValueError):
    """A physical input lies outside the domain of a formula (negative mass, T <= 0, ...)."""

    exit_code = EXIT_NUMERIC_DOMAIN_ERROR


class NoDephasingError(NumericDomainError):
    """
    Signals an infinite dephasing timescale.

    Raised when the energy spread or the path separation is zero, so no phase
    difference ever builds up between the two arms.
    """

    timescale: float = float("inf")


class NoDecoherenceError(NumericDomainError):
    """Signals an infinite collisional timescale (localization rate of zero)."""

    timescale: float = float("inf")


class ScenarioParseError(GravDephaseError):
    exit_code = EXIT_PARSE_ERROR


class ValidationError(GravDephaseError, ValueError):
    """A value is well-formed but violates an invariant (normalization, ordering, counts)."""

    exit_code = EXIT_VALIDATION_ERROR


class ScenarioValidationError(ValidationError):
    pass
