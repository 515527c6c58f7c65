from __future__ import unicode_literals

import unittest

import numpy
from parameterized import parameterized

from uscqed import errors
from uscqed.enums import Factor
from uscqed.hilbert import (
    Operator,
    SpaceLayout,
    annihilation,
    bare_excitations,
    embed,
    embed_product,
    identity,
    number,
    operator_function,
    pauli,
)


class TestSpaceLayout(unittest.TestCase):
    def test_build(self):
        layout = SpaceLayout.build(5, atoms=["sensor", Factor.atom_a])
        self.assertEqual(layout.labels, (Factor.cavity, Factor.atom_a, Factor.sensor))
        self.assertEqual(layout.total_dim, 20)
        self.assertEqual(layout.n_fock, 5)
        self.assertEqual(layout.atoms, (Factor.atom_a, Factor.sensor))
        self.assertIn("sensor", layout)
        self.assertNotIn("atom_b", layout)
        self.assertNotIn("nonsense", layout)

    def test_equality(self):
        self.assertEqual(SpaceLayout.build(4), SpaceLayout.build(4))
        self.assertNotEqual(SpaceLayout.build(4), SpaceLayout.build(5))
        self.assertEqual(hash(SpaceLayout.build(4)), hash(SpaceLayout.build(4)))

    @parameterized.expand(
        [
            ("duplicate", [("cavity", 4), ("atom_a", 2), ("atom_a", 2)]),
            ("unknown", [("cavity", 4), ("atom_c", 2)]),
            ("order", [("cavity", 4), ("atom_b", 2), ("atom_a", 2)]),
            ("small_cavity", [("cavity", 1)]),
            ("atom_dim", [("cavity", 4), ("atom_a", 3)]),
        ]
    )
    def test_invalid(self, _, factors):
        with self.assertRaises(errors.LayoutError) as ctx:
            SpaceLayout(factors)
        self.assertTrue(ctx.exception.diagnostics)

    def test_missing_factor(self):
        layout = SpaceLayout.build(3)
        with self.assertRaises(errors.LayoutError):
            layout.dim("atom_b")
        with self.assertRaises(errors.LayoutError):
            pauli(layout, "x", "sensor")


class TestOperators(unittest.TestCase):
    def setUp(self):
        self.layout = SpaceLayout.build(6, atoms=("atom_a", "atom_b"))

    def test_number_spectrum(self):
        cavity_only = SpaceLayout.build(6, atoms=())
        values = numpy.linalg.eigvalsh(number(cavity_only).data)
        numpy.testing.assert_allclose(values, numpy.arange(6), atol=1e-12)

    def test_sigma_z(self):
        sigma_z = pauli(self.layout, "z", "atom_a")
        values = numpy.unique(numpy.round(numpy.linalg.eigvalsh(sigma_z.data), 12))
        numpy.testing.assert_allclose(values, [-1.0, 1.0])
        plus = pauli(self.layout, "plus", "atom_a")
        minus = pauli(self.layout, "minus", "atom_a")
        numpy.testing.assert_allclose(
            sigma_z.data, (plus @ minus - minus @ plus).data, atol=1e-14
        )

    def test_commutators(self):
        # [a, a^dagger] = 1 except on the truncated top level
        a = annihilation(self.layout)
        commutator = a.commutator(a.dag()).data
        diagonal = numpy.real(numpy.diag(commutator)).reshape(6, 4)
        numpy.testing.assert_allclose(diagonal[:-1], 1.0, atol=1e-12)
        numpy.testing.assert_allclose(diagonal[-1], -5.0, atol=1e-12)

    def test_factors_commute(self):
        x_a = pauli(self.layout, "x", "atom_a")
        x_b = pauli(self.layout, "y", "atom_b")
        a = annihilation(self.layout)
        self.assertAlmostEqual(x_a.commutator(x_b).norm(), 0.0)
        self.assertAlmostEqual(x_a.commutator(a).norm(), 0.0)

    def test_embed_product(self):
        sx = numpy.array([[0, 1], [1, 0]])
        both = embed_product([(sx, "atom_a"), (sx, "atom_b")], self.layout)
        expected = pauli(self.layout, "x", "atom_a") @ pauli(self.layout, "x", "atom_b")
        numpy.testing.assert_allclose(both.data, expected.data)
        with self.assertRaises(errors.LayoutError):
            embed_product([(sx, "atom_a"), (sx, "atom_a")], self.layout)
        with self.assertRaises(errors.LayoutError):
            embed(sx, "sensor", self.layout)
        with self.assertRaises(errors.LayoutError):
            embed(numpy.eye(3), "atom_a", self.layout)

    def test_layout_mismatch(self):
        other = identity(SpaceLayout.build(6))
        with self.assertRaises(errors.LayoutError):
            identity(self.layout) + other

    def test_immutable(self):
        op = identity(self.layout)
        with self.assertRaises(ValueError):
            op.data[0, 0] = 2.0

    def test_hermitian_check(self):
        a = annihilation(self.layout)
        self.assertFalse(a.is_hermitian())
        self.assertTrue((a + a.dag()).is_hermitian())
        with self.assertRaises(errors.NumericalError):
            Operator(self.layout, a.data, hermitian=True)

    def test_scalar_arithmetic(self):
        op = 2 * identity(self.layout) - identity(self.layout) * 0.5
        numpy.testing.assert_allclose(numpy.diag(op.data), 1.5)
        numpy.testing.assert_allclose(numpy.diag((op / 3).data), 0.5)

    def test_unknown_pauli(self):
        with self.assertRaises(ValueError):
            pauli(self.layout, "w", "atom_a")

    def test_bare_excitations(self):
        layout = SpaceLayout.build(3, atoms=("atom_a",))
        self.assertEqual(bare_excitations(layout).tolist(), [0, 1, 1, 2, 2, 3])

    def test_operator_function(self):
        a = annihilation(SpaceLayout.build(8, atoms=())).data
        x = a + a.conj().T
        cos = operator_function(x, numpy.cos)
        sin = operator_function(x, numpy.sin)
        numpy.testing.assert_allclose(cos @ cos + sin @ sin, numpy.eye(8), atol=1e-12)
