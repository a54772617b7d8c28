"""Exception hierarchy.

Every error carries a short machine-readable ``code`` which the command line
front end reports as ``{"error": {"code": ..., "message": ...}}``.
"""


class CapError(ValueError):
    code = "error"


class NotPrimeError(CapError):
    code = "not_prime"


class OutOfRangeError(CapError):
    code = "out_of_range"


class DigitOutOfRangeError(CapError):
    code = "digit_out_of_range"


class CodeOutOfRangeError(CapError):
    code = "code_out_of_range"


class DimensionMismatchError(CapError):
    code = "dimension_mismatch"


class FieldMismatchError(CapError):
    code = "field_mismatch"


class _LineError(CapError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BadHeaderError(_LineError):
    code = "bad_header"


class BadDigitError(_LineError):
    code = "bad_digit"


class DuplicatePointError(_LineError):
    code = "duplicate_point"


class InvalidTripleError(CapError):
    code = "invalid_triple"


class InvalidCoefficientsError(CapError):
    code = "invalid_coefficients"


class TooLargeError(CapError):
    code = "too_large"


class NotIndependentError(CapError):
    code = "not_independent"


class NoValidRearrangementError(CapError):
    code = "no_valid_rearrangement"


class TooSmallError(CapError):
    code = "too_small"


class InfeasibleError(CapError):
    code = "infeasible"


class BudgetExhaustedError(CapError):
    code = "budget_exhausted"


class BadConfigError(CapError):
    code = "bad_config"
