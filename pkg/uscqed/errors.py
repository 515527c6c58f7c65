"""Exception classes raised by model construction and numerical solves.

All exception classes are derived from `~uscqed.errors.USCError`, which
may be used as a catch-all exception for the library. Configuration
problems raise a `ConfigError` carrying one `Diagnostic` per offending
field, numerical breakdowns raise a subclass of `NumericalError`.

"""

from __future__ import print_function, unicode_literals

import typing

import functools
import six
from collections import namedtuple
from six import text_type

if typing.TYPE_CHECKING:
    from typing import Iterable, List, Optional, Text


__all__ = [
    "ConfigError",
    "ConfigParseError",
    "Diagnostic",
    "EigensolverFailed",
    "GaugeMismatch",
    "IntegrationFailed",
    "JobsFailed",
    "LayoutError",
    "NumericalError",
    "RecipeNotFound",
    "SingularResolvent",
    "SteadyStateError",
    "USCError",
]


#: A single configuration problem, ``path`` is a dotted field path
#: such as ``model.omega_a`` or ``sweep[1].n_points``.
Diagnostic = namedtuple("Diagnostic", ["path", "message"])


@six.python_2_unicode_compatible
class USCError(Exception):
    """Base exception for the `uscqed` package."""

    default_message = "Unspecified error"

    def __init__(self, msg=None):  # noqa: D107
        # type: (Optional[Text]) -> None
        self._msg = msg or self.default_message
        super(USCError, self).__init__()

    def __str__(self):
        # type: () -> Text
        """Return the error message."""
        return self._msg.format(**self.__dict__)

    def __repr__(self):
        # type: () -> Text
        msg = self._msg.format(**self.__dict__)
        return "{}({!r})".format(self.__class__.__name__, msg)


class ConfigError(USCError):
    """A configuration is invalid.

    Attributes:
        diagnostics (list): the `Diagnostic` entries, one per problem.

    """

    default_message = "invalid configuration: {details}"

    def __init__(self, diagnostics, msg=None):  # noqa: D107
        # type: (Iterable[Diagnostic], Optional[Text]) -> None
        self.diagnostics = list(diagnostics)  # type: List[Diagnostic]
        self.details = "; ".join(
            "{}: {}".format(path, message) for path, message in self.diagnostics
        )
        super(ConfigError, self).__init__(msg=msg)

    @classmethod
    def single(cls, path, message):
        # type: (Text, Text) -> ConfigError
        """Create an error with a single diagnostic."""
        return cls([Diagnostic(path, message)])

    def __reduce__(self):
        return type(self), (self.diagnostics, self._msg)


class LayoutError(ConfigError):
    """A Hilbert-space layout is missing, repeating or naming a factor."""


class GaugeMismatch(ConfigError):
    """Objects built from different gauges or configurations were mixed."""


class ConfigParseError(ConfigError):
    """A configuration file is not syntactically valid."""

    default_message = "could not parse configuration: {details}"


class NumericalError(USCError):
    """A numerical routine failed.

    Attributes:
        operation (str): the operation that failed.
        details (str): a description of the failure.
        exc (Exception, optional): the underlying exception, if any.

    """

    default_message = "numerical failure in {operation}: {details}"

    def __init__(self, operation="computation", details=None, exc=None, msg=None):
        # type: (Text, Optional[Text], Optional[Exception], Optional[Text]) -> None
        self.operation = operation
        self.exc = exc
        if details is None:
            details = "" if exc is None else text_type(exc)
        self.details = details
        super(NumericalError, self).__init__(msg=msg)

    @classmethod
    def catch_all(cls, func):
        """Convert any unexpected exception raised by ``func``."""

        @functools.wraps(func)
        def new_func(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except USCError:
                raise
            except Exception as e:
                raise cls(operation=func.__name__, exc=e)

        return new_func  # type: ignore

    def __reduce__(self):
        return type(self), (self.operation, self.details, self.exc, self._msg)


class EigensolverFailed(NumericalError):
    """The Hermitian eigensolver did not converge."""


class IntegrationFailed(NumericalError):
    """Time integration of the master equation failed."""


class SteadyStateError(NumericalError):
    """The Liouvillian does not have a unique steady state."""

    default_message = (
        "steady state is not unique in {operation} (null space dimension {dimension})"
    )

    def __init__(self, dimension, operation="steady_state", msg=None):
        # type: (int, Text, Optional[Text]) -> None
        self.dimension = dimension
        super(SteadyStateError, self).__init__(operation=operation, msg=msg)

    def __reduce__(self):
        return type(self), (self.dimension, self.operation, self._msg)


class SingularResolvent(NumericalError):
    """The resolvent ``(L + i omega)`` is singular at a grid frequency."""

    default_message = "resolvent is singular at omega={omega!r}"

    def __init__(self, omega, exc=None, msg=None):
        # type: (float, Optional[Exception], Optional[Text]) -> None
        self.omega = omega
        super(SingularResolvent, self).__init__(
            operation="spectrum_qrt", exc=exc, msg=msg
        )

    def __reduce__(self):
        return type(self), (self.omega, self.exc, self._msg)


class RecipeNotFound(USCError):
    """No bundled or installed recipe has the requested name."""

    default_message = "no recipe named '{name}'"

    def __init__(self, name, msg=None):  # noqa: D107
        # type: (Text, Optional[Text]) -> None
        self.name = name
        super(RecipeNotFound, self).__init__(msg=msg)

    def __reduce__(self):
        return type(self), (self.name, self._msg)


class JobsFailed(USCError):
    """One or more jobs failed in worker threads."""

    default_message = "{count} job(s) failed (see errors attribute)"

    def __init__(self, errors):  # noqa: D107
        self.errors = errors
        self.count = len(errors)
        super(JobsFailed, self).__init__()
