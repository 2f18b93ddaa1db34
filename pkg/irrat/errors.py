"""Exception hierarchy and error categorisation.

Every failure the engine can raise derives from :class:`IrratError`. ``classify``
maps an exception to an :class:`ErrorCategory`; the per-category tables give the
CLI a display name, a recovery suggestion and an exit code.

Evaluation limits (bit budget, prime ceiling, magnitude level cap) share the
:class:`EvaluationLimit` base so prefix scans can stop on any of them.
"""

from __future__ import annotations

from enum import Enum


class IrratError(Exception):
    """Base class for all engine errors."""


# --- input errors ---


class ParseError(IrratError):
    """Malformed sequence expression; ``position`` is a character offset into the input."""

    def __init__(self, message: str, *, position: int, text: str = "") -> None:
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position
        self.text = text


class UnknownName(IrratError):
    def __init__(self, name: str, *, known: tuple[str, ...] = ()) -> None:
        hint = f" (known: {', '.join(known)})" if known else ""
        super().__init__(f"unknown catalog entry {name!r}{hint}")
        self.name = name
        self.known = known


class InvalidParam(IrratError):
    def __init__(self, message: str, *, name: str | None = None) -> None:
        super().__init__(message)
        self.name = name


class InvalidPolynomial(IrratError):
    pass


class UnsupportedSignMode(IrratError):
    pass


class SpecFileError(IrratError):
    def __init__(self, message: str, *, line: int | None = None) -> None:
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


# --- evaluation errors ---


class NonPositiveValue(IrratError):
    def __init__(self, message: str, *, value: int | None = None) -> None:
        super().__init__(message)
        self.value = value


class InexactDivision(IrratError):
    def __init__(self, numerator: int, denominator: int) -> None:
        super().__init__(f"division is not exact: {denominator} does not divide the numerator")
        self.numerator = numerator
        self.denominator = denominator


# --- evaluation limits ---


class EvaluationLimit(IrratError):
    """An exact evaluation was refused because a configured limit would be exceeded."""


class BitBudgetExceeded(EvaluationLimit):
    def __init__(self, *, bits: int, budget: int) -> None:
        super().__init__(f"value needs about {bits} bits, budget is {budget}")
        self.bits = bits
        self.budget = budget


class PrimeCeilingExceeded(EvaluationLimit):
    def __init__(self, *, index: int, ceiling: int) -> None:
        shown = index if index.bit_length() <= 64 else f"2^~{index.bit_length() - 1}"
        super().__init__(f"prime index {shown} is beyond the sieve ceiling {ceiling}")
        self.index = index
        self.ceiling = ceiling


class LevelCapExceeded(EvaluationLimit):
    def __init__(self, *, level: int, cap: int) -> None:
        super().__init__(f"magnitude needs {level} iterated logarithms, cap is {cap}")
        self.level = level
        self.cap = cap


class MagnitudeUnresolved(EvaluationLimit):
    """The log-space representation cannot bound this operation."""


# --- certificate errors ---


class CertificateError(IrratError):
    pass


class CertificateGap(CertificateError):
    pass


class NoConvergenceEvidence(CertificateError):
    pass


class InsufficientWidth(CertificateError):
    pass


class IndeterminateWidth(CertificateError):
    pass


class ErrorCategory(Enum):
    """Coarse classes of failure, each with its own exit code."""

    INPUT = "INPUT"
    EVALUATION = "EVALUATION"
    LIMIT = "LIMIT"
    CERTIFICATE = "CERTIFICATE"
    UNKNOWN = "UNKNOWN"


_INPUT = (ParseError, UnknownName, InvalidParam, InvalidPolynomial, UnsupportedSignMode,
          SpecFileError)


def classify(error: BaseException | None) -> ErrorCategory:
    """Classify an exception. Returns UNKNOWN for ``None`` and foreign exceptions."""
    if error is None:
        return ErrorCategory.UNKNOWN
    if isinstance(error, _INPUT):
        return ErrorCategory.INPUT
    if isinstance(error, (NonPositiveValue, InexactDivision)):
        return ErrorCategory.EVALUATION
    if isinstance(error, EvaluationLimit):
        return ErrorCategory.LIMIT
    if isinstance(error, CertificateError):
        return ErrorCategory.CERTIFICATE
    return ErrorCategory.UNKNOWN


_EXIT_CODE = {
    ErrorCategory.INPUT: 2,
    ErrorCategory.EVALUATION: 2,
    ErrorCategory.LIMIT: 1,
    ErrorCategory.CERTIFICATE: 1,
    ErrorCategory.UNKNOWN: 2,
}

_DISPLAY_NAME = {
    ErrorCategory.INPUT: "Input Error",
    ErrorCategory.EVALUATION: "Evaluation Error",
    ErrorCategory.LIMIT: "Evaluation Limit",
    ErrorCategory.CERTIFICATE: "Certificate Error",
    ErrorCategory.UNKNOWN: "Unknown Error",
}

_SUGGESTION = {
    ErrorCategory.INPUT: (
        "Check the expression syntax (see docs/grammar.md), the catalog name "
        "(`irrat list`) and parameter values."
    ),
    ErrorCategory.EVALUATION: (
        "Every subexpression must be a positive integer for every index; "
        "divisions must be exact. Check the start index."
    ),
    ErrorCategory.LIMIT: (
        "The exact value is too large. Raise IRRAT_BIT_BUDGET, lower --prefix, "
        "or rely on the magnitude-based checkers."
    ),
    ErrorCategory.CERTIFICATE: (
        "The tail could not be certified. Try fewer digits, a longer prefix, "
        "or supply a decreasing envelope."
    ),
    ErrorCategory.UNKNOWN: "Run again with --verbose and check the log for details.",
}


def exit_code(category: ErrorCategory) -> int:
    """Process exit code the CLI uses for this category."""
    return _EXIT_CODE[category]


def display_name(category: ErrorCategory) -> str:
    """Human-readable category name."""
    return _DISPLAY_NAME[category]


def suggestion(category: ErrorCategory) -> str:
    """Actionable recovery suggestion for this category."""
    return _SUGGESTION[category]
