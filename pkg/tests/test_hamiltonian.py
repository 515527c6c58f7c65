from __future__ import unicode_literals

import logging
import unittest

import numpy
from parameterized import parameterized

from uscqed import errors, hamiltonian
from uscqed.enums import BathKind, Channel, Factor, Gauge, Model
from uscqed.hamiltonian import (
    ModelConfig,
    build_gdm,
    build_jcm,
    build_model,
    build_qrm_coulomb,
    build_qrm_dipole,
    build_saa,
    convergence_check,
    gauge_transform_check,
    lowest_energies,
)
from uscqed.hilbert import Operator, bare_excitations


def _commutator_norm(model, diagonal):
    H = model.H.data
    commutator = H * diagonal[None, :] - diagonal[:, None] * H
    return numpy.linalg.norm(commutator) / numpy.linalg.norm(H)


class TestModelConfig(unittest.TestCase):
    def test_defaults(self):
        config = ModelConfig()
        self.assertIs(config.model, Model.qrm)
        self.assertIs(config.gauge, Gauge.dipole)
        self.assertEqual(config.N_fock, 200)
        self.assertEqual(config.total_dim, 400)
        self.assertAlmostEqual(config.rate("kappa"), 0.125)
        self.assertAlmostEqual(config.rate("P_inc"), 0.005)

    def test_absolute_rates(self):
        config = ModelConfig(relative_to_g=False, kappa=0.1, g_s=0.002)
        self.assertAlmostEqual(config.rate("kappa"), 0.1)
        self.assertAlmostEqual(config.sensor_coupling, 0.002)
        with self.assertRaises(KeyError):
            config.rate("omega_a")

    def test_complex_coupling(self):
        config = ModelConfig(model=Model.gdm, g_b=0.5, phi_b=0.5)
        self.assertAlmostEqual(config.eta_b, 0.5j)
        emitters = config.emitters()
        self.assertEqual([factor for factor, _, _ in emitters], [Factor.atom_a, Factor.atom_b])

    def test_collects_every_problem(self):
        with self.assertRaises(errors.ConfigError) as ctx:
            ModelConfig.from_mapping(
                {"omega_a": -1.0, "kappa": -0.1, "gauge": "velocity", "colour": 3}
            )
        paths = {path for path, _ in ctx.exception.diagnostics}
        self.assertEqual(paths, {"model.gauge", "model.colour"})
        with self.assertRaises(errors.ConfigError) as ctx:
            ModelConfig.from_mapping({"omega_a": -1.0, "kappa": -0.1})
        paths = {path for path, _ in ctx.exception.diagnostics}
        self.assertEqual(paths, {"model.omega_a", "model.kappa"})

    @parameterized.expand(
        [
            ("m_too_large", {"N_fock": 3, "M_dressed": 7}, "model.M_dressed"),
            ("small_fock", {"N_fock": 1}, "model.N_fock"),
            ("rwa_coulomb", {"model": "jcm", "gauge": "coulomb"}, "model.gauge"),
            (
                "naive_complex",
                {
                    "model": "gdm",
                    "gauge": "coulomb",
                    "corrected": False,
                    "g_b": 0.5,
                    "phi_b": 0.5,
                },
                "model.phi_b",
            ),
            ("window", {"window_factor": 0.0}, "model.window_factor"),
            ("bool_type", {"corrected": 1}, "model.corrected"),
        ]
    )
    def test_invalid(self, _, mapping, path):
        with self.assertRaises(errors.ConfigError) as ctx:
            ModelConfig.from_mapping(mapping)
        self.assertIn(path, [item.path for item in ctx.exception.diagnostics])

    def test_from_mapping_base(self):
        base = ModelConfig(N_fock=20)
        config = ModelConfig.from_mapping({"g_a": 0.3}, base=base)
        self.assertEqual(config.N_fock, 20)
        self.assertEqual(config.g_a, 0.3)

    def test_digest(self):
        first = ModelConfig(N_fock=20)
        self.assertEqual(first.digest(), ModelConfig(N_fock=20).digest())
        self.assertNotEqual(first.digest(), first.replace(kappa=0.3).digest())
        self.assertEqual(first.to_dict()["bath_cav"], "ohmic")

    def test_naive_alias(self):
        config = ModelConfig(model=Model.qrm_naive_coulomb)
        self.assertIs(config.effective_gauge, Gauge.coulomb)
        self.assertFalse(config.gauge_corrected)


class TestQuantumRabi(unittest.TestCase):
    def test_decoupled(self):
        model = build_qrm_dipole(ModelConfig(g_a=0.0, N_fock=10))
        numpy.testing.assert_allclose(
            lowest_energies(model, 6), [0, 1, 1, 2, 2, 3], atol=1e-12
        )
        self.assertTrue(model.H.is_hermitian())

    def test_hamiltonian_hermitian(self):
        for gauge in Gauge:
            model = build_model(ModelConfig(N_fock=30, gauge=gauge))
            self.assertTrue(model.H.is_hermitian())
            self.assertTrue(model.Pi.is_hermitian())

    def test_jcm_one_excitation(self):
        g = 0.1
        model = build_jcm(ModelConfig(model=Model.jcm, g_a=g, N_fock=10))
        energies = lowest_energies(model, 3)
        numpy.testing.assert_allclose(energies[1:], [1 - g, 1 + g], atol=1e-12)

    def test_jcm_agrees_at_weak_coupling(self):
        config = ModelConfig(g_a=0.02, N_fock=30)
        qrm = lowest_energies(build_qrm_dipole(config), 5)
        jcm = lowest_energies(build_jcm(config.replace(model=Model.jcm)), 5)
        self.assertLess(numpy.abs(qrm - jcm).max(), 0.01)

    @parameterized.expand([(0.1,), (0.5,)])
    def test_gauge_invariance(self, eta):
        config = ModelConfig(g_a=eta, N_fock=80, M_dressed=10)
        dipole = build_qrm_dipole(config)
        coulomb = build_qrm_coulomb(config.replace(gauge=Gauge.coulomb))
        self.assertLess(gauge_transform_check(dipole, coulomb), 1e-6)

    def test_naive_coulomb_fails(self):
        config = ModelConfig(g_a=0.5, N_fock=60, M_dressed=5)
        dipole = build_qrm_dipole(config)
        naive = build_model(config.replace(model=Model.qrm_naive_coulomb))
        self.assertIs(naive.gauge, Gauge.coulomb)
        self.assertGreater(gauge_transform_check(dipole, naive, levels=5), 0.01)

    def test_corrected_field_operator(self):
        config = ModelConfig(g_a=0.5, N_fock=20)
        corrected = build_qrm_dipole(config)
        naive = build_qrm_dipole(config.replace(corrected=False))
        numpy.testing.assert_allclose(corrected.H.data, naive.H.data)
        difference = corrected.a_corrected - naive.a_corrected
        self.assertAlmostEqual(difference.norm(), 0.5 * numpy.sqrt(40))

    def test_wrong_family(self):
        with self.assertRaises(errors.ConfigError):
            build_qrm_dipole(ModelConfig(model=Model.gdm))
        with self.assertRaises(errors.ConfigError):
            build_saa(ModelConfig(model=Model.qrm))

    def test_convergence(self):
        config = ModelConfig(g_a=0.5, N_fock=40)
        self.assertLess(convergence_check(config, levels=6), 1e-8)

    def test_channel_operator(self):
        model = build_qrm_dipole(ModelConfig(N_fock=10))
        self.assertIs(model.channel_operator(Channel.cav), model.Pi)
        with self.assertRaises(errors.LayoutError):
            model.channel_operator("atom_b")


class TestSensingAtom(unittest.TestCase):
    def test_decoupled_sensor(self):
        config = ModelConfig(model=Model.saa, g_a=0.5, g_s=0.0, N_fock=30)
        energies = lowest_energies(build_saa(config), 6)
        qrm = lowest_energies(build_qrm_dipole(config.replace(model=Model.qrm)), 6)
        # the decoupled sensor adds a copy of every level shifted by omega_s
        expected = numpy.sort(numpy.concatenate([qrm, qrm + config.omega_s]))[:6]
        numpy.testing.assert_allclose(energies, expected, atol=1e-10)

    def test_coupling_warning(self):
        config = ModelConfig(model=Model.saa, g_s=0.1, N_fock=10)
        with self.assertLogs("uscqed.hamiltonian", logging.WARNING):
            build_saa(config)

    def test_gauge_invariance(self):
        config = ModelConfig(model=Model.saa, g_a=0.5, g_s=0.002, omega_s=0.7, N_fock=60)
        dipole = build_saa(config)
        coulomb = build_saa(config, gauge=Gauge.coulomb)
        self.assertIs(coulomb.gauge, Gauge.coulomb)
        self.assertLess(gauge_transform_check(dipole, coulomb, levels=8), 1e-6)

    def test_rwa_override(self):
        config = ModelConfig(model=Model.saa, g_s=0.002, N_fock=10)
        with self.assertRaises(errors.ConfigError):
            build_saa(config, gauge=Gauge.coulomb, rwa=True)


class TestTwoAtoms(unittest.TestCase):
    def gdm(self, **kwargs):
        params = dict(model=Model.gdm, g_a=0.5, g_b=0.5, omega_b=0.5, N_fock=50)
        params.update(kwargs)
        return ModelConfig(**params)

    @parameterized.expand([(0.0,), (0.3,), (0.5,)])
    def test_gauge_invariance(self, phi):
        config = self.gdm(phi_b=phi)
        dipole = build_gdm(config)
        coulomb = build_gdm(config.replace(gauge=Gauge.coulomb))
        self.assertLess(gauge_transform_check(dipole, coulomb, levels=8), 1e-6)

    def test_phase_symmetry(self):
        first = lowest_energies(build_gdm(self.gdm(phi_b=0.3)), 8)
        second = lowest_energies(build_gdm(self.gdm(phi_b=0.7)), 8)
        numpy.testing.assert_allclose(first, second, atol=1e-9)

    def test_decoupled_second_atom(self):
        config = self.gdm(g_b=0.0, omega_b=0.6)
        energies = lowest_energies(build_gdm(config), 4)
        single = lowest_energies(build_qrm_dipole(config.replace(model=Model.qrm)), 4)
        self.assertAlmostEqual(energies[1], min(0.6, single[1]), places=9)

    def test_uncorrected_drops_direct_term(self):
        config = self.gdm(N_fock=10)
        corrected = build_gdm(config)
        naive = build_gdm(config.replace(corrected=False))
        self.assertGreater((corrected.H - naive.H).norm(), 0.1)

    def test_rwa(self):
        model = build_model(self.gdm(model=Model.gdm_rwa, N_fock=10))
        self.assertIs(model.gauge, Gauge.dipole)
        self.assertTrue(model.H.is_hermitian())


class TestSymmetries(unittest.TestCase):
    @parameterized.expand(
        [
            ("qrm_dipole", dict(model=Model.qrm), Gauge.dipole),
            ("qrm_coulomb", dict(model=Model.qrm), Gauge.coulomb),
            ("gdm_dipole", dict(model=Model.gdm, g_b=0.5, omega_b=0.5), Gauge.dipole),
            ("gdm_coulomb", dict(model=Model.gdm, g_b=0.5, omega_b=0.5), Gauge.coulomb),
            (
                "gdm_phase",
                dict(model=Model.gdm, g_b=0.5, omega_b=0.7, phi_b=0.3),
                Gauge.coulomb,
            ),
        ]
    )
    def test_parity_commutes(self, _, params, gauge):
        config = ModelConfig(g_a=0.5, N_fock=30, gauge=gauge, **params)
        model = build_model(config)
        parity = (-1.0) ** bare_excitations(model.layout)
        self.assertLess(_commutator_norm(model, parity), 1e-10)

    @parameterized.expand(
        [
            ("jcm", dict(model=Model.jcm)),
            ("saa_rwa", dict(model=Model.saa_rwa, g_s=0.002, omega_s=0.7)),
            ("gdm_rwa", dict(model=Model.gdm_rwa, g_b=0.5, omega_b=0.5)),
            ("gdm_rwa_phase", dict(model=Model.gdm_rwa, g_b=0.4, phi_b=0.25)),
        ]
    )
    def test_rwa_conserves_excitations(self, _, params):
        model = build_model(ModelConfig(g_a=0.5, N_fock=12, **params))
        excitations = bare_excitations(model.layout).astype(float)
        self.assertLess(_commutator_norm(model, excitations), 1e-12)

    def test_full_model_mixes_excitations(self):
        model = build_model(ModelConfig(g_a=0.5, N_fock=12))
        excitations = bare_excitations(model.layout).astype(float)
        self.assertGreater(_commutator_norm(model, excitations), 0.01)

    def test_sensor_branches_at_half_multiples(self):
        config = ModelConfig(
            model=Model.saa, g_a=0.02, g_s=0.001, omega_s=0.5, N_fock=12
        )
        energies = lowest_energies(build_saa(config), 8)
        doubled = 2 * energies
        self.assertLess(numpy.abs(doubled - numpy.round(doubled)).max(), 0.1)
        self.assertEqual(
            sorted(set(numpy.round(doubled).astype(int).tolist())), [0, 1, 2, 3, 4]
        )


class TestBuildChecks(unittest.TestCase):
    def test_rejects_non_hermitian(self):
        layout = ModelConfig(N_fock=4).layout
        data = numpy.zeros((layout.total_dim,) * 2, dtype=complex)
        data[0, 1] = 1.0
        with self.assertRaises(errors.NumericalError):
            hamiltonian._hermitian(Operator(layout, data))

    def test_symmetrises_rounding(self):
        layout = ModelConfig(N_fock=4).layout
        data = numpy.eye(layout.total_dim, dtype=complex)
        data[0, 1] = 1e-16
        result = hamiltonian._hermitian(Operator(layout, data))
        numpy.testing.assert_array_equal(result.data, result.data.conj().T)

    def test_many_coulomb_builds(self):
        # more distinct couplings than the quadrature cache holds
        count = hamiltonian._trig_cache.cache_size + 6
        for index in range(count):
            config = ModelConfig(
                g_a=0.01 * (index + 1), N_fock=6, M_dressed=4, gauge=Gauge.coulomb
            )
            model = build_model(config)
            self.assertTrue(model.H.is_hermitian())
        self.assertLessEqual(
            len(hamiltonian._trig_cache), hamiltonian._trig_cache.cache_size
        )
