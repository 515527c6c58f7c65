from __future__ import unicode_literals

import json
import unittest

import numpy
from parameterized import parameterized

from fs.memoryfs import MemoryFS

from uscqed import output
from uscqed.dressed import ParityTable, QuadratureRate
from uscqed.enums import Gauge, Method, Output
from uscqed.spectra import SpectrumResult


class TestFormatCell(unittest.TestCase):
    @parameterized.expand(
        [
            (0.5, "5.00000000000000000e-01"),
            (numpy.float64(-1.25), "-1.25000000000000000e+00"),
            (3, "3"),
            (numpy.int64(7), "7"),
            (True, "1"),
            (numpy.bool_(False), "0"),
            (float("nan"), "nan"),
            ("even", "even"),
        ]
    )
    def test_format_cell(self, value, expected):
        self.assertEqual(output.format_cell(value), expected)

    def test_full_precision(self):
        value = 0.1 + 0.2
        self.assertEqual(float(output.format_cell(value)), value)


class TestCsv(unittest.TestCase):
    def setUp(self):
        self.fs = MemoryFS()

    def tearDown(self):
        self.fs.close()

    def test_write_read(self):
        output.write_csv(self.fs, "table.csv", ("a", "b"), [(1, 0.5), (2, 1.5)])
        self.assertEqual(
            self.fs.readtext("table.csv"),
            "a,b\n1,5.00000000000000000e-01\n2,1.50000000000000000e+00\n",
        )
        header, rows = output.read_csv(self.fs, "table.csv")
        self.assertEqual(header, ["a", "b"])
        self.assertEqual(len(rows), 2)

    def test_read_table(self):
        output.write_csv(self.fs, "table.csv", ("x", "y"), [(0, 0.25), (1, numpy.nan)])
        header, data = output.read_table(self.fs, "table.csv")
        self.assertEqual(header, ["x", "y"])
        self.assertEqual(data.shape, (2, 2))
        self.assertEqual(data[0, 1], 0.25)
        self.assertTrue(numpy.isnan(data[1, 1]))

    def test_read_header_only(self):
        output.write_csv(self.fs, "empty.csv", ("x", "y"), [])
        header, data = output.read_table(self.fs, "empty.csv")
        self.assertEqual(header, ["x", "y"])
        self.assertEqual(data.shape, (0, 2))

    def test_read_empty_file(self):
        self.fs.writetext("blank.csv", "")
        self.assertEqual(output.read_csv(self.fs, "blank.csv"), ([], []))

    def test_write_json(self):
        data = {
            "gauge": Gauge.coulomb,
            "count": numpy.int32(3),
            "grid": numpy.array([0.0, 1.0]),
            "rate": numpy.float32(0.5),
        }
        output.write_json(self.fs, "meta.json", data)
        text = self.fs.readtext("meta.json")
        self.assertTrue(text.endswith("}\n"))
        self.assertEqual(
            json.loads(text),
            {"count": 3, "gauge": "coulomb", "grid": [0.0, 1.0], "rate": 0.5},
        )

    def test_write_json_rejects_objects(self):
        with self.assertRaises(TypeError):
            output.write_json(self.fs, "bad.json", {"x": object()})


class TestRows(unittest.TestCase):
    def test_headers(self):
        self.assertEqual(set(output.HEADERS), set(Output))
        for header in output.HEADERS.values():
            self.assertEqual(header[0], "value")

    def test_eigenvalue_rows(self):
        rows = output.eigenvalue_rows(0.5, numpy.array([0.0, 0.75]))
        self.assertEqual(rows, [(0.5, 0, 0.0), (0.5, 1, 0.75)])

    def test_parity_rows(self):
        table = ParityTable(numpy.array([1.0, -1.0]))
        rows = output.parity_rows(0.1, table)
        self.assertEqual(rows, [(0.1, 0, 1.0), (0.1, 1, -1.0)])

    def test_p2_rows(self):
        rates = [QuadratureRate(0, 1, 0.5, 0.2, 0.01)]
        self.assertEqual(output.p2_rows(1.0, rates), [(1.0, 0, 1, 0.5, 0.2, 0.01)])
        for row in output.p2_rows(1.0, rates):
            self.assertEqual(len(row), len(output.HEADERS[Output.p2_table]))

    def test_spectrum_rows(self):
        result = SpectrumResult(
            [0.1, 0.2], [1.0, 2.0], Method.qrt, Gauge.dipole, "hash"
        )
        self.assertEqual(
            output.spectrum_rows(0.3, result), [(0.3, 0.1, 1.0), (0.3, 0.2, 2.0)]
        )
