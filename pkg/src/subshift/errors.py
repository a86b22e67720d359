"""Exception hierarchy. Each class maps onto one CLI exit code."""


class SubshiftError(Exception):
    exit_code = 1


class InputError(SubshiftError, ValueError):
    """Malformed or inconsistent input (alphabet mismatch, unparseable text)."""

    exit_code = 2


class BudgetError(SubshiftError):
    """A counting/enumeration/depth cap would be exceeded."""

    exit_code = 3

    def __init__(self, message, required=None, cap=None):
        super().__init__(message)
        self.required = required
        self.cap = cap


class PrecisionError(SubshiftError, ValueError):
    """Not enough decimal digits (or numerical precision) to decide a result."""

    exit_code = 4
