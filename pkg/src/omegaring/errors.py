"""Exception hierarchy shared by every module of the package."""


class AlgebraError(Exception):
    """Base class for all errors raised by omegaring."""


class DomainMismatchError(AlgebraError, TypeError):
    def __init__(self, message: str = "mixed domains") -> None:
        super().__init__(message)


class DivisionByZeroError(AlgebraError, ZeroDivisionError):
    def __init__(self, message: str = "division by zero") -> None:
        super().__init__(message)


class ChainBoundError(AlgebraError):
    def __init__(self, message: str = "no accepted chain within bound") -> None:
        super().__init__(message)


class NotInvertibleError(AlgebraError):
    def __init__(self, message: str = "not invertible") -> None:
        super().__init__(message)


class GcdUndefinedError(AlgebraError, ValueError):
    def __init__(self, message: str = "gcd undefined") -> None:
        super().__init__(message)


class PrecisionError(AlgebraError):
    """Raised when truncation leaves too few coefficients to certify a result.

    ``partial`` carries whatever was computed before the failure (for matrix
    reduction, a partial certificate).
    """

    def __init__(self, message: str, partial=None) -> None:
        super().__init__(message)
        self.partial = partial


class ParseError(AlgebraError, ValueError):
    pass
