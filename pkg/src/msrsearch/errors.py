"""Exception hierarchy shared by every module of the package."""


class MSRError(Exception):
    """Base class for all errors raised by msrsearch."""


class NotPrime(MSRError, ValueError):
    pass


class ReduciblePolynomial(MSRError, ValueError):
    pass


class OrderTooLarge(MSRError, ValueError):
    pass


class FieldMismatch(MSRError, ValueError):
    pass


class DivisionByZero(MSRError, ZeroDivisionError):
    pass


class DimensionMismatch(MSRError, ValueError):
    pass


class NotSquare(MSRError, ValueError):
    pass


class Singular(MSRError, ValueError):
    pass


class InvalidParameters(MSRError, ValueError):
    pass


class NoValidRotation(MSRError, ValueError):
    pass


class InvalidConfig(MSRError, ValueError):
    pass


class MixedConfigs(MSRError, ValueError):
    pass


class ParseError(MSRError, ValueError):
    """Malformed code file; ``line`` is 1-based, or None if not line-specific."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
