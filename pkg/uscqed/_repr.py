"""Tools to generate __repr__ strings.
"""

from __future__ import unicode_literals

import typing

import numpy

if typing.TYPE_CHECKING:
    from typing import Text, Tuple


def _short(value):
    # type: (object) -> Text
    if isinstance(value, numpy.ndarray):
        return "<array {} {}>".format("x".join(map(str, value.shape)), value.dtype)
    return repr(value)


def make_repr(class_name, *args, **kwargs):
    # type: (Text, *object, **Tuple[object, object]) -> Text
    """Generate a repr string.

    Positional arguments are rendered as given. Keyword arguments are
    ``(value, default)`` tuples and are omitted when the value equals
    the default. Arrays are summarised by shape and dtype.

    Example:
        >>> make_repr('BathSpec', 'ohmic', base_rate=(0.1, 0.0), reference=(1.0, 1.0))
        "BathSpec('ohmic', base_rate=0.1)"
        >>> make_repr('Operator', numpy.zeros((4, 4)))
        'Operator(<array 4x4 float64>)'

    """
    arguments = [_short(arg) for arg in args]
    for name, (value, default) in sorted(kwargs.items()):
        if isinstance(value, numpy.ndarray) or value != default:
            arguments.append("{}={}".format(name, _short(value)))
    return "{}({})".format(class_name, ", ".join(arguments))
