"""Read and write the CSV and JSON files of a run.

Every file goes through a PyFilesystem `~fs.base.FS`, so runs can be
written to a local directory or kept in memory.

"""

from __future__ import absolute_import, unicode_literals

import typing

import csv
import enum
import json

import numpy
import six

from .constants import FLOAT_FORMAT
from .enums import Output

if typing.TYPE_CHECKING:
    from typing import Any, Iterable, List, Sequence, Text, Tuple

    from fs.base import FS

    from .dressed import ParityTable, QuadratureRate
    from .spectra import SpectrumResult

    Row = Sequence[Any]


__all__ = [
    "HEADERS",
    "eigenvalue_rows",
    "format_cell",
    "p2_rows",
    "parity_rows",
    "read_csv",
    "read_table",
    "spectrum_rows",
    "write_csv",
    "write_json",
]

#: Column names of every merged table.
HEADERS = {
    Output.eigenvalues: ("value", "state", "energy"),
    Output.parity: ("value", "state", "parity"),
    Output.p2_table: ("value", "j", "k", "omega", "p2", "rate"),
    Output.spectrum_qrt: ("value", "omega_over_omega_c", "intensity"),
    Output.spectrum_saa: ("value", "omega_over_omega_c", "intensity"),
}

#: Columns of a single spectrum file.
SPECTRUM_HEADER = ("omega_over_omega_c", "intensity")


def format_cell(value):
    # type: (Any) -> Text
    """Format one CSV cell: floats in full precision, integers plainly.

    Example:
        >>> format_cell(0.5)
        '5.00000000000000000e-01'
        >>> format_cell(3)
        '3'

    """
    if isinstance(value, (bool, numpy.bool_)):
        return six.text_type(int(value))
    if isinstance(value, six.integer_types + (numpy.integer,)):
        return six.text_type(int(value))
    if isinstance(value, (float, numpy.floating)):
        return FLOAT_FORMAT.format(float(value))
    return six.text_type(value)


def write_csv(fs, path, header, rows):
    # type: (FS, Text, Sequence[Text], Iterable[Row]) -> None
    """Write a header and rows as a comma separated file."""
    with fs.open(path, "w", encoding="utf-8", newline="") as csv_file:
        writer = csv.writer(csv_file, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(cell) for cell in row])


def read_csv(fs, path):
    # type: (FS, Text) -> Tuple[List[Text], List[List[Text]]]
    """Read a comma separated file as its header and string rows."""
    with fs.open(path, "r", encoding="utf-8", newline="") as csv_file:
        rows = list(csv.reader(csv_file))
    if not rows:
        return [], []
    return rows[0], rows[1:]


def read_table(fs, path):
    # type: (FS, Text) -> Tuple[List[Text], numpy.ndarray]
    """Read a numeric comma separated file as its header and an array."""
    header, rows = read_csv(fs, path)
    data = numpy.array(
        [[float(cell) for cell in row] for row in rows], dtype=float
    ).reshape(len(rows), len(header))
    return header, data


def _json_default(value):
    # type: (Any) -> Any
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, numpy.integer):
        return int(value)
    if isinstance(value, numpy.floating):
        return float(value)
    if isinstance(value, numpy.ndarray):
        return value.tolist()
    raise TypeError("cannot serialise {!r}".format(value))


def write_json(fs, path, data):
    # type: (FS, Text, Any) -> None
    """Write JSON with sorted keys."""
    text = json.dumps(data, sort_keys=True, indent=2, default=_json_default)
    fs.writetext(path, text + "\n", encoding="utf-8")


def eigenvalue_rows(value, energies):
    # type: (float, Sequence[float]) -> List[Row]
    return [(value, state, float(energy)) for state, energy in enumerate(energies)]


def parity_rows(value, table):
    # type: (float, ParityTable) -> List[Row]
    return [(value, state, float(parity)) for state, parity in enumerate(table.values)]


def p2_rows(value, rates):
    # type: (float, Sequence[QuadratureRate]) -> List[Row]
    return [(value, row.j, row.k, row.omega, row.p2, row.rate) for row in rates]


def spectrum_rows(value, result):
    # type: (float, SpectrumResult) -> List[Row]
    return [
        (value, float(omega), float(intensity))
        for omega, intensity in zip(result.omega_grid, result.intensity)
    ]
