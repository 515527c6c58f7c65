from __future__ import unicode_literals

import textwrap
import unittest

from parameterized import parameterized

from fs.tempfs import TempFS

from uscqed import errors
from uscqed.config import (
    DEFAULT_TOLERANCES,
    SweepSpec,
    load_run_config,
    parse_run_config,
)
from uscqed.enums import Gauge, Model, Output, SweepTarget
from uscqed.hamiltonian import ModelConfig
from uscqed.recipes import registry

_GDM = textwrap.dedent(
    """
    # two atoms against the resonance frequency of the second
    [model]
    model = "gdm"
    g_a = 0.5
    g_b = 0.5
    N_fock = 30

    [spectrum]
    omega_min = 0.1
    omega_max = 2.0
    n_points = 50

    [[variants]]
    name = "dipole"

    [[variants]]
    name = "coulomb"
    gauge = "coulomb"

    [[sweep]]
    target = "omega_b"
    start = 0.5
    stop = 1.5
    n_points = 3
    outputs = ["eigenvalues", "spectrum_qrt"]

    [tolerances]
    eigenvalues = 1e-9
    """
)


def _diagnostic_paths(text):
    try:
        parse_run_config(text)
    except errors.ConfigError as error:
        return [diagnostic.path for diagnostic in error.diagnostics]
    raise AssertionError("no ConfigError raised")


class TestParseRunConfig(unittest.TestCase):
    def test_parse(self):
        config = parse_run_config(_GDM)
        self.assertEqual(config.model.model, Model.gdm)
        self.assertEqual(config.model.N_fock, 30)
        self.assertEqual([v.name for v in config.variants], ["dipole", "coulomb"])
        self.assertIs(config.variants[1].config.gauge, Gauge.coulomb)
        self.assertEqual(config.variants[1].config.g_b, 0.5)
        self.assertEqual(len(config.sweeps), 1)
        sweep = config.sweeps[0]
        self.assertIs(sweep.target, SweepTarget.omega_b)
        self.assertEqual(list(sweep.values()), [0.5, 1.0, 1.5])
        self.assertEqual(sweep.outputs, [Output.eigenvalues, Output.spectrum_qrt])
        self.assertEqual(config.spectrum.grid()[-1], 2.0)
        self.assertEqual(len(config.spectrum.grid()), 50)
        self.assertEqual(config.tolerances[Output.eigenvalues], 1e-9)
        self.assertEqual(
            config.tolerances[Output.spectrum_qrt], DEFAULT_TOLERANCES[Output.spectrum_qrt]
        )
        self.assertEqual(config.source, _GDM)
        self.assertIsNone(config.workers)

    def test_default_variant(self):
        config = parse_run_config(
            '[model]\nmodel = "qrm"\n[run]\noutputs = ["eigenvalues"]\nworkers = 2\n'
        )
        self.assertEqual([v.name for v in config.variants], ["base"])
        self.assertIs(config.variants[0].config, config.model)
        self.assertEqual(config.sweeps, [])
        self.assertEqual(config.outputs, [Output.eigenvalues])
        self.assertEqual(config.workers, 2)

    def test_syntax_error(self):
        with self.assertRaises(errors.ConfigParseError) as ctx:
            parse_run_config("[model\n", filename="run.toml")
        self.assertEqual(ctx.exception.diagnostics[0].path, "run.toml")

    def test_every_problem_reported(self):
        text = textwrap.dedent(
            """
            colour = "blue"
            [model]
            kappa = -1.0
            omega_c = 0.0
            [spectrum]
            n_points = 1
            [[sweep]]
            target = "temperature"
            start = 0.0
            stop = 1.0
            n_points = 1
            outputs = ["heat"]
            """
        )
        paths = _diagnostic_paths(text)
        for path in [
            "colour",
            "model.kappa",
            "model.omega_c",
            "spectrum.n_points",
            "sweep[0].target",
            "sweep[0].n_points",
            "sweep[0].outputs[0]",
        ]:
            self.assertIn(path, paths)

    @parameterized.expand(
        [
            ("unknown_model_field", '[model]\nwidth = 2\n[run]\noutputs = ["parity"]', "model.width"),
            ("bad_variant_name", '[[variants]]\nname = "a b"\n[run]\noutputs = ["parity"]', "variants[0].name"),
            ("bad_variant_field", '[[variants]]\nname = "a"\nkappa = "x"\n[run]\noutputs = ["parity"]', "variants[0].kappa"),
            ("no_outputs", "[model]\n", "run.outputs"),
            ("bad_workers", '[run]\noutputs = ["parity"]\nworkers = -1', "run.workers"),
            ("unknown_run_field", '[run]\noutputs = ["parity"]\nseed = 1', "run.seed"),
            ("spectrum_range", '[spectrum]\nomega_min = 2.0\nomega_max = 1.0\n[run]\noutputs = ["parity"]', "spectrum.omega_max"),
            ("normalize_type", '[spectrum]\nnormalize = 1\n[run]\noutputs = ["parity"]', "spectrum.normalize"),
            ("saa_output", '[run]\noutputs = ["spectrum_saa"]', "run.outputs"),
            ("two_atom_target", '[[sweep]]\ntarget = "omega_b"\nstart = 0.5\nstop = 1.0\noutputs = ["parity"]', "sweep[0].target"),
            ("sensor_target", '[[sweep]]\ntarget = "omega_s"\nstart = 0.5\nstop = 1.0\noutputs = ["parity"]', "sweep[0].target"),
            ("missing_stop", '[[sweep]]\ntarget = "eta_single"\nstart = 0.5\noutputs = ["parity"]', "sweep[0]"),
            ("negative_start", '[[sweep]]\ntarget = "eta_single"\nstart = -0.5\nstop = 1.0\noutputs = ["parity"]', "sweep[0].start"),
            ("no_sweep_outputs", '[[sweep]]\ntarget = "eta_single"\nstart = 0.0\nstop = 1.0', "sweep[0].outputs"),
            ("phase_range", '[model]\nmodel = "gdm"\n[[sweep]]\ntarget = "phi_b"\nstart = 0.0\nstop = 3.0\noutputs = ["parity"]', "sweep[0].stop"),
            ("tolerance_value", '[run]\noutputs = ["parity"]\n[tolerances]\nparity = 0', "tolerances.parity"),
            ("tolerance_name", '[run]\noutputs = ["parity"]\n[tolerances]\nfoo = 1e-3', "tolerances.foo"),
            ("model_not_table", 'model = 1\n[run]\noutputs = ["parity"]', "model"),
        ]
    )
    def test_invalid(self, _, text, path):
        self.assertIn(path, _diagnostic_paths(text))

    def test_duplicate_variant(self):
        text = '[[variants]]\nname = "a"\n[[variants]]\nname = "a"\n[run]\noutputs = ["parity"]'
        self.assertEqual(_diagnostic_paths(text), ["variants[1].name"])

    def test_phase_mirror_warning(self):
        text = '[model]\nmodel = "gdm"\n[[sweep]]\ntarget = "phi_b"\nstart = 0.0\nstop = 1.5\noutputs = ["parity"]'
        with self.assertLogs("uscqed.config", "WARNING"):
            config = parse_run_config(text)
        self.assertEqual(config.sweeps[0].stop, 1.5)


class TestConfigHash(unittest.TestCase):
    def test_stable(self):
        self.assertEqual(
            parse_run_config(_GDM).config_hash, parse_run_config(_GDM).config_hash
        )
        self.assertEqual(len(parse_run_config(_GDM).config_hash), 64)

    def test_ignores_formatting(self):
        reformatted = _GDM.replace("g_a = 0.5", "g_a   =   0.50  # coupling")
        self.assertEqual(
            parse_run_config(_GDM).config_hash,
            parse_run_config(reformatted).config_hash,
        )

    def test_ignores_workers_and_tolerances(self):
        other = _GDM.replace("eigenvalues = 1e-9", "eigenvalues = 1e-3")
        other += "\n[run]\nworkers = 4\n"
        self.assertEqual(
            parse_run_config(_GDM).config_hash, parse_run_config(other).config_hash
        )

    @parameterized.expand(
        [
            ("N_fock = 30", "N_fock = 31"),
            ("n_points = 50", "n_points = 51"),
            ('name = "coulomb"', 'name = "coulomb2"'),
            ("stop = 1.5", "stop = 1.6"),
            ("[spectrum]", "[spectrum]\nnormalize = true"),
        ]
    )
    def test_sensitive(self, old, new):
        self.assertNotEqual(
            parse_run_config(_GDM).config_hash,
            parse_run_config(_GDM.replace(old, new)).config_hash,
        )


class TestSweepSpec(unittest.TestCase):
    def test_eta_joint(self):
        base = ModelConfig(model=Model.gdm, g_b=0.2, phi_b=0.5, N_fock=10)
        swept = SweepSpec("eta_joint", 0.0, 1.0, 2, ["eigenvalues"]).apply(base, 0.7)
        self.assertEqual((swept.g_a, swept.g_b, swept.phi_b), (0.7, 0.7, 0.5))

    def test_eta_joint_one_atom(self):
        base = ModelConfig(N_fock=10, omega_c=2.0)
        swept = SweepSpec("eta_joint", 0.0, 1.0, 2, ["eigenvalues"]).apply(base, 0.25)
        self.assertEqual(swept.g_a, 0.5)
        self.assertAlmostEqual(swept.eta_a, 0.25)

    def test_eta_single(self):
        base = ModelConfig(model=Model.gdm, g_b=0.2, N_fock=10)
        swept = SweepSpec("eta_single", 0.0, 1.0, 2, ["eigenvalues"]).apply(base, 0.4)
        self.assertEqual((swept.g_a, swept.g_b), (0.4, 0.2))

    @parameterized.expand(
        [
            ("omega_b", "omega_b", 1.3),
            ("g_b_magnitude", "g_b", 0.3),
            ("phi_b", "phi_b", 0.25),
        ]
    )
    def test_two_atom_targets(self, target, field, value):
        base = ModelConfig(model=Model.gdm, N_fock=10)
        swept = SweepSpec(target, 0.0, 1.0, 2, ["eigenvalues"]).apply(base, value)
        self.assertEqual(getattr(swept, field), value)

    def test_omega_s(self):
        base = ModelConfig(model=Model.saa, g_s=0.001, N_fock=10)
        swept = SweepSpec("omega_s", 0.2, 1.0, 2, ["eigenvalues"]).apply(base, 0.6)
        self.assertEqual(swept.omega_s, 0.6)
        self.assertEqual(base.omega_s, 1.0)

    def test_invalid_value(self):
        base = ModelConfig(model=Model.gdm, N_fock=10)
        with self.assertRaises(errors.ConfigError):
            SweepSpec("omega_b", 0.0, 1.0, 2, ["eigenvalues"]).apply(base, 0.0)

    def test_to_dict(self):
        sweep = SweepSpec("phi_b", 0.0, 1.0, 11, ["spectrum_qrt"])
        self.assertEqual(
            sweep.to_dict(),
            {
                "target": "phi_b",
                "start": 0.0,
                "stop": 1.0,
                "n_points": 11,
                "outputs": ["spectrum_qrt"],
            },
        )


class TestLoadRunConfig(unittest.TestCase):
    def test_load_path(self):
        with TempFS() as temp_fs:
            temp_fs.writetext("run.toml", _GDM)
            config = load_run_config(temp_fs.getsyspath("run.toml"))
        self.assertEqual(config.config_hash, parse_run_config(_GDM).config_hash)

    def test_load_missing(self):
        with TempFS() as temp_fs:
            path = temp_fs.getsyspath("missing.toml")
            with self.assertRaises(errors.ConfigError) as ctx:
                load_run_config(path)
        self.assertEqual(ctx.exception.diagnostics[0].path, path)

    def test_load_recipe(self):
        config = load_run_config("recipe://qrm-jcm-eigenvalues")
        self.assertEqual([v.name for v in config.variants], ["qrm", "jcm"])
        self.assertIs(config.variants[1].config.model, Model.jcm)

    def test_unknown_recipe(self):
        with self.assertRaises(errors.RecipeNotFound):
            load_run_config("recipe://does-not-exist")


class TestRecipes(unittest.TestCase):
    def test_bundled(self):
        self.assertIn("qrm-jcm-eigenvalues", registry.names)
        self.assertGreaterEqual(len(registry.names), 13)

    def test_every_recipe_parses(self):
        for name in registry.names:
            recipe = registry.get(name)
            config = parse_run_config(recipe.load(), filename=name)
            self.assertTrue(recipe.description, name)
            self.assertTrue(config.sweeps or config.outputs, name)
