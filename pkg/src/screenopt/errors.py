"""Exception hierarchy for screenopt.

Every error carries an ErrorCode so callers (the CLI in particular) can map
failures to stable exit codes without matching on message text.
"""

from __future__ import annotations

from enum import StrEnum


class ErrorCode(StrEnum):
    """Stable machine-readable error identifiers."""

    NOT_POSITIVE_DEFINITE = "NOT_POSITIVE_DEFINITE"
    SINGULAR_UPDATE = "SINGULAR_UPDATE"
    SINGULAR_DESIGN = "SINGULAR_DESIGN"
    SINGULAR_EXCHANGE = "SINGULAR_EXCHANGE"
    ALL_SINGULAR = "ALL_SINGULAR"
    NO_CONVERGENCE = "NO_CONVERGENCE"
    INCONSISTENT_SPEC = "INCONSISTENT_SPEC"
    DOMAIN_VIOLATION = "DOMAIN_VIOLATION"
    INVALID_INPUT = "INVALID_INPUT"
    NONSINGULAR_START_NOT_FOUND = "NONSINGULAR_START_NOT_FOUND"
    ALL_STARTS_FAILED = "ALL_STARTS_FAILED"
    NO_RESIDUAL_DF = "NO_RESIDUAL_DF"
    REPRODUCTION_FAILED = "REPRODUCTION_FAILED"


class ScreenoptError(Exception):
    """Base class for all screenopt errors.

    Attributes:
        message: Human-readable description.
        error_code: Machine-readable identifier.
    """

    def __init__(self, message: str, error_code: ErrorCode) -> None:
        super().__init__(message)
        self.message = message
        self.error_code = error_code


# ---------------------------------------------------------------------------
# Specification and input errors
# ---------------------------------------------------------------------------


class SpecError(ScreenoptError):
    """A model specification, design, or CLI input is malformed."""


class InconsistentSpecError(SpecError):
    """Design and model specification disagree, or the specification violates its invariants."""


class DomainViolationError(SpecError):
    """A factor setting lies outside its declared domain."""


class InvalidInputError(SpecError):
    """A file or flag could not be parsed."""


# ---------------------------------------------------------------------------
# Linear algebra
# ---------------------------------------------------------------------------


class LinearAlgebraError(ScreenoptError):
    """Raised by the dense symmetric linear algebra helpers."""


class NotPositiveDefiniteError(LinearAlgebraError):
    """A symmetric matrix failed the positive-definiteness pivot test."""


class SingularUpdateError(LinearAlgebraError):
    """A rank-two inverse update would make the information matrix singular."""


class SingularDesignError(ScreenoptError):
    """The design cannot estimate every effect the criterion or diagnostic needs."""


# ---------------------------------------------------------------------------
# Exchange and search
# ---------------------------------------------------------------------------


class ExchangeError(ScreenoptError):
    """Raised by the exchange delta formulas and coordinate solvers."""


class SingularExchangeError(ExchangeError):
    """The proposed exchange has a determinant ratio at or below the singularity guard."""


class AllSingularError(ExchangeError):
    """Every candidate coordinate makes the design singular."""


class NoConvergenceError(ExchangeError):
    """The fractional-programming iteration hit its iteration cap."""


class SearchError(ScreenoptError):
    """Raised by the multi-start search driver."""


class CannotFindNonsingularStartError(SearchError):
    """No nonsingular random starting design was found."""


class AllStartsFailedError(SearchError):
    """Every start of a multi-start search failed."""


# ---------------------------------------------------------------------------
# Diagnostics and reproduction
# ---------------------------------------------------------------------------


class NoResidualDFError(ScreenoptError):
    """The fitted submodel leaves no residual degrees of freedom for a t-test."""


class ReproductionCheckError(ScreenoptError):
    """A reproduction check fell outside its tolerance."""


# ---------------------------------------------------------------------------
# Warnings
# ---------------------------------------------------------------------------


class ConvergenceWarning(UserWarning):
    """A coordinate-exchange start stopped at the pass cap while still improving."""


class RankDeficitWarning(UserWarning):
    """The run size is below the number of parameters a non-Bayesian criterion must estimate."""
