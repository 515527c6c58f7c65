"""Tools for managing linear-algebra errors.
"""

from __future__ import print_function, unicode_literals

import typing

import numpy
import scipy.linalg
from six import reraise

from . import errors

if typing.TYPE_CHECKING:
    from typing import Optional, Text, Type

    from types import TracebackType


class _ConvertLinalgErrors(object):
    """Context manager to convert linear-algebra failures into USC errors."""

    CONVERTED = (
        numpy.linalg.LinAlgError,
        scipy.linalg.LinAlgError,
        FloatingPointError,
        ValueError,
    )

    def __init__(self, operation, error_class=errors.NumericalError):
        # type: (Text, Type[errors.NumericalError]) -> None
        self._operation = operation
        self._error_class = error_class

    def __enter__(self):
        # type: () -> _ConvertLinalgErrors
        return self

    def __exit__(
        self,
        exc_type,  # type: Optional[Type[BaseException]]
        exc_value,  # type: Optional[BaseException]
        traceback,  # type: Optional[TracebackType]
    ):
        # type: (...) -> None
        if exc_type and isinstance(exc_value, self.CONVERTED):
            error = self._error_class(operation=self._operation, exc=exc_value)
            reraise(type(error), error, traceback)


# Stops linter complaining about invalid class name
convert_linalg_errors = _ConvertLinalgErrors
