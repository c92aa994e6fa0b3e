"""Exception types raised across the package."""


class FGCError(Exception):
    """Base class for computation errors (CLI exit code 1)."""


class NotCoprime(FGCError, ValueError):
    pass


class NotPrimePower(FGCError, ValueError):
    pass


class CapExceeded(FGCError):
    pass


class InexactDivision(FGCError, ArithmeticError):
    pass


class EmptyCoset(FGCError):
    pass


class DivisionByZeroSeries(FGCError, ZeroDivisionError):
    pass


class PrecisionUnachievable(FGCError):
    pass


class ParseError(FGCError, ValueError):
    pass


class OrthogonalityViolation(FGCError):
    pass


class SizeMismatch(FGCError):
    pass


class EigenFailure(FGCError):
    def __init__(self, message, matrix_index=None):
        super().__init__(message)
        self.matrix_index = matrix_index


class NonIntegralResult(FGCError, ArithmeticError):
    pass


class DomainError(FGCError, ValueError):
    pass


class DepthExceeded(FGCError):
    pass
