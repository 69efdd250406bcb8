"""
Errors - Exception hierarchy shared by every robustvda package
"""

from typing import Optional


class VDAError(Exception):
    """Root of all robustvda errors"""


class ArgumentError(VDAError, ValueError):
    """Invalid argument, shape mismatch or out-of-range label"""


class NumericError(VDAError, ArithmeticError):
    """NaN input or non-finite loss"""


class DataError(VDAError, ValueError):
    """Empty or malformed data"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class StateError(VDAError, RuntimeError):
    """Operation called in the wrong state (no gradients, no tape)"""
