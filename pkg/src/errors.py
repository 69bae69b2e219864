"""Exception hierarchy and error codes shared by all theta-lab modules."""

from typing import Optional


class ThetaLabErrorCodes:
    INVALID_PARAMETER = "InvalidParameter"
    FIELD_MISMATCH = "FieldMismatch"
    PRIME_NOT_SPLIT = "PrimeNotSplit"
    SHAPE_MISMATCH = "ShapeMismatch"
    INVALID_INPUT = "InvalidInput"
    UNSUPPORTED = "Unsupported"
    MATH_DOMAIN = "MathDomainError"
    PRECISION_EXHAUSTED = "PrecisionExhausted"
    INVARIANT_VIOLATION = "InvariantViolation"
    UNKNOWN_ERROR = "UnknownError"


class ThetaLabError(Exception):
    """Base class; every subclass carries a stable ``error_code``."""

    error_code: str = ThetaLabErrorCodes.UNKNOWN_ERROR

    def __init__(self, message: str, error_code: Optional[str] = None):
        super().__init__(message)
        if error_code:
            self.error_code = error_code


class ParameterError(ThetaLabError, ValueError):
    error_code = ThetaLabErrorCodes.INVALID_PARAMETER


class NotSplitError(ParameterError):
    error_code = ThetaLabErrorCodes.PRIME_NOT_SPLIT


class ShapeError(ThetaLabError, ValueError):
    error_code = ThetaLabErrorCodes.SHAPE_MISMATCH


class InvalidInputError(ThetaLabError, ValueError):
    error_code = ThetaLabErrorCodes.INVALID_INPUT


class UnsupportedError(ThetaLabError, NotImplementedError):
    error_code = ThetaLabErrorCodes.UNSUPPORTED


class MathDomainError(ThetaLabError, ArithmeticError):
    error_code = ThetaLabErrorCodes.MATH_DOMAIN


class PrecisionError(MathDomainError):
    error_code = ThetaLabErrorCodes.PRECISION_EXHAUSTED


class InvariantViolation(ThetaLabError, AssertionError):
    error_code = ThetaLabErrorCodes.INVARIANT_VIOLATION


# 退出码: 0 成功, 1 校验/形状错误, 2 数学定义域错误
EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_MATH_DOMAIN = 2


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the CLI exit code."""
    if isinstance(exc, MathDomainError):
        return EXIT_MATH_DOMAIN
    return EXIT_VALIDATION
