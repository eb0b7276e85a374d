"""Exceptions classes for f451 System Identification module.

This module holds the custom exceptions used across all components of
the f451 System Identification module.
"""
from typing import Any

# =========================================================
#          G L O B A L S   A N D   H E L P E R S
# =========================================================
_ERROR_UNKNOWN_: str = "Unknown error"


# =========================================================
#        M A I N   C L A S S   D E F I N I T I O N
# =========================================================
class f451SysIdExceptionError(Exception):
    """Exception base class for f451 System Identification module.

    Catch this exception to catch all custom exceptions from
    the f451 System Identification module.

    Looks for ``message`` and ``data`` in kwargs

    Args:
        args:
            exception arguments
        kwargs:
            exception kwargs
    """

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        self.message = kwargs.get("message", _ERROR_UNKNOWN_)
        self.data = kwargs.get("data")
        super().__init__(self.message)

    def __repr__(self) -> str:
        return f"<f451SysIdError: {self.message}>"


class InvalidArgumentError(f451SysIdExceptionError):
    """Invalid argument error.

    Raised when given value is out of bounds and/or does not meet
    requirements for a given argument (e.g. mismatched matrix dimensions,
    window too long for the data, probability outside (0,1), etc.).

    Args:
        errMsg:
            error message for 'validation' failure
        args:
            exception arguments
        kwargs:
            exception kwargs
    """

    def __init__(self, errMsg: str, *args: Any, **kwargs: Any) -> None:
        kwargs["message"] = f"Invalid argument error: {errMsg}"
        super().__init__(*args, **kwargs)

    def __repr__(self) -> str:
        return f"<InvalidArgumentError: {self.message}>"


class MissingAttributeError(f451SysIdExceptionError):
    """Missing attribute error.

    Raised when required config attributes are missing.

    Args:
        errMsg:
            Error message for missing (required) 'attribute'
        args:
            Exception arguments
        kwargs:
            Exception kwargs
    """

    def __init__(self, errMsg: str, *args: Any, **kwargs: Any) -> None:
        kwargs["message"] = f"Missing attribute error: {errMsg}"
        super().__init__(*args, **kwargs)

    def __repr__(self) -> str:
        return f"<MissingAttributeError: {self.message}>"


class NumericalFailureError(f451SysIdExceptionError):
    """Numerical failure.

    Raised when a dense linear algebra routine does not converge, or when
    a matrix that must be inverted is singular.

    Args:
        errMsg:
            error message describing the failed computation
        args:
            exception arguments
        kwargs:
            exception kwargs
    """

    def __init__(self, errMsg: str, *args: Any, **kwargs: Any) -> None:
        kwargs["message"] = f"Numerical failure: {errMsg}"
        super().__init__(*args, **kwargs)

    def __repr__(self) -> str:
        return f"<NumericalFailureError: {self.message}>"


class IllPosedRegressionError(f451SysIdExceptionError):
    """Ill-posed regression.

    Raised when the regressor matrix of a least-squares problem does not
    have full column rank.

    Args:
        rank:
            numerical rank of the regressor matrix
        cols:
            number of regressor columns (i.e. rank required)
        args:
            exception arguments
        kwargs:
            exception kwargs
    """

    def __init__(self, rank: int, cols: int, *args: Any, **kwargs: Any) -> None:
        self.rank = rank
        self.cols = cols
        kwargs["message"] = (
            f"Ill-posed regression: regressors have numerical rank {rank} < {cols}"
        )
        super().__init__(*args, **kwargs)

    def __repr__(self) -> str:
        return f"<IllPosedRegressionError: rank={self.rank}, cols={self.cols}>"
