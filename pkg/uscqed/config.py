"""Parse and validate run configuration files.

A run file is TOML::

    [model]
    model = "gdm"
    g_b = 0.5

    [spectrum]
    n_points = 200

    [[variants]]
    name = "coulomb"
    gauge = "coulomb"

    [[sweep]]
    target = "omega_b"
    start = 0.25
    stop = 2.0
    n_points = 50
    outputs = ["eigenvalues", "spectrum_qrt"]

Every problem found is reported at once in a single
`~uscqed.errors.ConfigError`, with dotted paths such as
``sweep[0].n_points``.

"""

from __future__ import absolute_import, unicode_literals

import typing

import hashlib
import json
import logging
import re

import numpy
import six

from . import errors
from ._repr import make_repr
from .constants import DEFAULT_OMEGA_MAX, DEFAULT_OMEGA_MIN, DEFAULT_OMEGA_POINTS
from .enums import Model, Output, SweepTarget
from .hamiltonian import ModelConfig

try:
    import tomllib
except ImportError:  # pragma: no cover
    import tomli as tomllib  # type: ignore

if typing.TYPE_CHECKING:
    from typing import Any, Dict, List, Mapping, Optional, Text

    from .errors import Diagnostic


__all__ = [
    "DEFAULT_TOLERANCES",
    "RunConfig",
    "SpectrumSettings",
    "SweepSpec",
    "Variant",
    "load_run_config",
    "parse_run_config",
]

log = logging.getLogger("uscqed.config")

#: Relative tolerances used by ``compare`` when a run sets none.
DEFAULT_TOLERANCES = {
    Output.eigenvalues: 1e-10,
    Output.parity: 1e-8,
    Output.p2_table: 1e-8,
    Output.spectrum_qrt: 1e-6,
    Output.spectrum_saa: 1e-6,
}

_TABLES = {"model", "spectrum", "variants", "sweep", "run", "tolerances"}
_NAME = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_.-]*$")
_TWO_ATOM_TARGETS = (SweepTarget.omega_b, SweepTarget.g_b_magnitude, SweepTarget.phi_b)
_SENSOR_MODELS = (Model.saa, Model.saa_rwa)
_TWO_ATOM_MODELS = (Model.gdm, Model.gdm_rwa)


class SpectrumSettings(object):
    """The emission-frequency grid of spectrum outputs."""

    def __init__(
        self,
        omega_min=DEFAULT_OMEGA_MIN,  # type: float
        omega_max=DEFAULT_OMEGA_MAX,  # type: float
        n_points=DEFAULT_OMEGA_POINTS,  # type: int
        normalize=False,  # type: bool
    ):
        # type: (...) -> None
        self.omega_min = omega_min
        self.omega_max = omega_max
        self.n_points = n_points
        self.normalize = normalize

    def __repr__(self):
        return make_repr(
            "SpectrumSettings",
            omega_min=(self.omega_min, DEFAULT_OMEGA_MIN),
            omega_max=(self.omega_max, DEFAULT_OMEGA_MAX),
            n_points=(self.n_points, DEFAULT_OMEGA_POINTS),
            normalize=(self.normalize, False),
        )

    def grid(self):
        # type: () -> numpy.ndarray
        """Get the frequency grid."""
        return numpy.linspace(self.omega_min, self.omega_max, self.n_points)

    def to_dict(self):
        # type: () -> Dict[Text, Any]
        return {
            "omega_min": self.omega_min,
            "omega_max": self.omega_max,
            "n_points": self.n_points,
            "normalize": self.normalize,
        }


class Variant(object):
    """A named set of model overrides applied to the base model."""

    def __init__(self, name, config):
        # type: (Text, ModelConfig) -> None
        self.name = name
        self.config = config

    def __repr__(self):
        return make_repr("Variant", self.name)


class SweepSpec(object):
    """A one-dimensional parameter scan.

    Arguments:
        target (SweepTarget): the scanned parameter.
        start (float): first value.
        stop (float): last value.
        n_points (int): number of values, at least 2.
        outputs (list): the `Output` tables computed at every value.

    """

    def __init__(self, target, start, stop, n_points, outputs):
        # type: (SweepTarget, float, float, int, List[Output]) -> None
        self.target = SweepTarget(target)
        self.start = start
        self.stop = stop
        self.n_points = n_points
        self.outputs = [Output(output) for output in outputs]

    def __repr__(self):
        return make_repr(
            "SweepSpec", str(self.target), self.start, self.stop, self.n_points
        )

    def values(self):
        # type: () -> numpy.ndarray
        """Get the scanned values."""
        return numpy.linspace(self.start, self.stop, self.n_points)

    def apply(self, config, value):
        # type: (ModelConfig, float) -> ModelConfig
        """Get ``config`` with the scanned parameter set to ``value``."""
        value = float(value)
        target = self.target
        if target is SweepTarget.eta_joint:
            if config.model in _TWO_ATOM_MODELS:
                g = value * config.omega_c
                return config.replace(g_a=g, g_b=g)
            return config.replace(g_a=value * config.omega_c)
        if target is SweepTarget.eta_single:
            return config.replace(g_a=value * config.omega_c)
        if target is SweepTarget.g_b_magnitude:
            return config.replace(g_b=value * config.omega_c)
        return config.replace(**{target.value: value})

    def to_dict(self):
        # type: () -> Dict[Text, Any]
        return {
            "target": self.target.value,
            "start": self.start,
            "stop": self.stop,
            "n_points": self.n_points,
            "outputs": [output.value for output in self.outputs],
        }


class RunConfig(object):
    """A parsed and validated run file.

    Attributes:
        model (ModelConfig): the base model.
        spectrum (SpectrumSettings): the spectrum grid.
        variants (list): the `Variant` list, at least one.
        sweeps (list): the `SweepSpec` list, may be empty.
        outputs (list): outputs of a single-point run.
        workers (int, optional): worker threads requested by the file.
        tolerances (dict): `Output` to relative tolerance.
        source (str): the text the config was parsed from.

    """

    def __init__(
        self,
        model,  # type: ModelConfig
        spectrum,  # type: SpectrumSettings
        variants,  # type: List[Variant]
        sweeps,  # type: List[SweepSpec]
        outputs,  # type: List[Output]
        workers=None,  # type: Optional[int]
        tolerances=None,  # type: Optional[Dict[Output, float]]
        source="",  # type: Text
    ):
        # type: (...) -> None
        self.model = model
        self.spectrum = spectrum
        self.variants = variants
        self.sweeps = sweeps
        self.outputs = outputs
        self.workers = workers
        self.tolerances = dict(DEFAULT_TOLERANCES)
        self.tolerances.update(tolerances or {})
        self.source = source

    def __repr__(self):
        return make_repr(
            "RunConfig",
            [variant.name for variant in self.variants],
            len(self.sweeps),
        )

    def canonical(self):
        # type: () -> Dict[Text, Any]
        """Get the content that determines the outputs of the run."""
        return {
            "model": self.model.to_dict(),
            "spectrum": self.spectrum.to_dict(),
            "variants": [
                {"name": variant.name, "model": variant.config.to_dict()}
                for variant in self.variants
            ],
            "sweeps": [sweep.to_dict() for sweep in self.sweeps],
            "outputs": [output.value for output in self.outputs],
        }

    @property
    def config_hash(self):
        # type: () -> Text
        """`str`: SHA-256 of the canonical content."""
        text = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


class _Collector(object):
    """Gather diagnostics while reading nested tables."""

    def __init__(self):
        self.diagnostics = []  # type: List[Diagnostic]

    def add(self, path, message):
        # type: (Text, Text) -> None
        self.diagnostics.append(errors.Diagnostic(path, message))

    def extend(self, error):
        # type: (errors.ConfigError) -> None
        self.diagnostics.extend(error.diagnostics)

    def table(self, document, key):
        # type: (Mapping[Text, Any], Text) -> Dict[Text, Any]
        value = document.get(key, {})
        if not isinstance(value, dict):
            self.add(key, "expected a table")
            return {}
        return dict(value)

    def tables(self, document, key):
        # type: (Mapping[Text, Any], Text) -> List[Dict[Text, Any]]
        value = document.get(key, [])
        if not isinstance(value, list) or not all(isinstance(v, dict) for v in value):
            self.add(key, "expected an array of tables")
            return []
        return value

    def number(self, table, key, path, default, integer=False):
        # type: (Dict[Text, Any], Text, Text, Any, bool) -> Any
        value = table.pop(key, default)
        kinds = six.integer_types if integer else six.integer_types + (float,)
        if isinstance(value, bool) or not isinstance(value, kinds):
            self.add(
                "{}.{}".format(path, key),
                "expected {}, got {!r}".format(
                    "an integer" if integer else "a number", value
                ),
            )
            return default
        return value

    def outputs(self, table, path):
        # type: (Dict[Text, Any], Text) -> List[Output]
        values = table.pop("outputs", [])
        if not isinstance(values, list):
            self.add("{}.outputs".format(path), "expected a list")
            return []
        result = []
        for index, value in enumerate(values):
            try:
                result.append(Output(value))
            except ValueError:
                self.add(
                    "{}.outputs[{}]".format(path, index),
                    "expected one of {}, got {!r}".format(
                        ", ".join(Output.choices()), value
                    ),
                )
        return result

    def unknown(self, table, path):
        # type: (Dict[Text, Any], Text) -> None
        for key in sorted(table):
            self.add("{}.{}".format(path, key), "unknown field")


def _parse_spectrum(collector, document):
    # type: (_Collector, Mapping[Text, Any]) -> SpectrumSettings
    table = collector.table(document, "spectrum")
    omega_min = collector.number(table, "omega_min", "spectrum", DEFAULT_OMEGA_MIN)
    omega_max = collector.number(table, "omega_max", "spectrum", DEFAULT_OMEGA_MAX)
    n_points = collector.number(
        table, "n_points", "spectrum", DEFAULT_OMEGA_POINTS, integer=True
    )
    normalize = table.pop("normalize", False)
    if not isinstance(normalize, bool):
        collector.add("spectrum.normalize", "expected true or false")
        normalize = False
    collector.unknown(table, "spectrum")
    if not 0 <= omega_min < omega_max:
        collector.add("spectrum.omega_max", "need 0 <= omega_min < omega_max")
    if n_points < 2:
        collector.add("spectrum.n_points", "must be >= 2")
    return SpectrumSettings(float(omega_min), float(omega_max), n_points, normalize)


def _parse_variants(collector, document, base):
    # type: (_Collector, Mapping[Text, Any], Optional[ModelConfig]) -> List[Variant]
    variants = []  # type: List[Variant]
    names = set()
    for index, table in enumerate(collector.tables(document, "variants")):
        path = "variants[{}]".format(index)
        table = dict(table)
        name = table.pop("name", None)
        if not isinstance(name, six.string_types) or not _NAME.match(name):
            collector.add("{}.name".format(path), "expected a file-name safe string")
            continue
        if name in names:
            collector.add("{}.name".format(path), "duplicate variant '{}'".format(name))
            continue
        names.add(name)
        if base is None:
            continue
        try:
            config = ModelConfig.from_mapping(table, path=path, base=base)
        except errors.ConfigError as error:
            collector.extend(error)
        else:
            variants.append(Variant(name, config))
    if not names and base is not None:
        variants.append(Variant("base", base))
    return variants


def _check_outputs(collector, path, outputs, variants):
    # type: (_Collector, Text, List[Output], List[Variant]) -> None
    if Output.spectrum_saa in outputs:
        for variant in variants:
            if variant.config.model not in _SENSOR_MODELS:
                collector.add(
                    path,
                    "spectrum_saa needs an saa model, variant '{}' is {}".format(
                        variant.name, variant.config.model
                    ),
                )


def _parse_sweeps(collector, document, variants):
    # type: (_Collector, Mapping[Text, Any], List[Variant]) -> List[SweepSpec]
    sweeps = []
    for index, table in enumerate(collector.tables(document, "sweep")):
        path = "sweep[{}]".format(index)
        table = dict(table)
        target = table.pop("target", None)
        try:
            target = SweepTarget(target)
        except ValueError:
            collector.add(
                "{}.target".format(path),
                "expected one of {}, got {!r}".format(
                    ", ".join(SweepTarget.choices()), target
                ),
            )
            target = None
        start = collector.number(table, "start", path, None)
        stop = collector.number(table, "stop", path, None)
        n_points = collector.number(table, "n_points", path, 2, integer=True)
        outputs = collector.outputs(table, path)
        collector.unknown(table, path)
        if start is None or stop is None:
            collector.add(path, "start and stop are required")
            continue
        if n_points < 2:
            collector.add("{}.n_points".format(path), "must be >= 2")
        if min(start, stop) < 0:
            collector.add("{}.start".format(path), "sweep values must be >= 0")
        if not outputs:
            collector.add("{}.outputs".format(path), "at least one output is required")
        if target is SweepTarget.phi_b:
            if max(start, stop) > 2:
                collector.add("{}.stop".format(path), "phi_b must lie in [0, 2]")
            elif max(start, stop) > 1:
                log.warning(
                    "%s: phi_b beyond 1 repeats the range mirrored about 1", path
                )
        for variant in variants:
            model = variant.config.model
            if target in _TWO_ATOM_TARGETS and model not in _TWO_ATOM_MODELS:
                collector.add(
                    "{}.target".format(path),
                    "{} needs a two-atom model, variant '{}' is {}".format(
                        target, variant.name, model
                    ),
                )
            if target is SweepTarget.omega_s and model not in _SENSOR_MODELS:
                collector.add(
                    "{}.target".format(path),
                    "omega_s needs an saa model, variant '{}' is {}".format(
                        variant.name, model
                    ),
                )
        _check_outputs(collector, "{}.outputs".format(path), outputs, variants)
        if target is not None:
            sweeps.append(
                SweepSpec(target, float(start), float(stop), n_points, outputs)
            )
    return sweeps


def _parse_tolerances(collector, document):
    # type: (_Collector, Mapping[Text, Any]) -> Dict[Output, float]
    tolerances = {}
    for key, value in collector.table(document, "tolerances").items():
        path = "tolerances.{}".format(key)
        try:
            output = Output(key)
        except ValueError:
            collector.add(path, "unknown output")
            continue
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
            collector.add(path, "expected a positive number")
            continue
        tolerances[output] = float(value)
    return tolerances


def parse_run_config(text, filename="<string>"):
    # type: (Text, Text) -> RunConfig
    """Parse the text of a run file.

    Raises:
        ~uscqed.errors.ConfigParseError: if the text is not valid TOML.
        ~uscqed.errors.ConfigError: listing every invalid field.

    """
    try:
        document = tomllib.loads(text)
    except tomllib.TOMLDecodeError as error:
        raise errors.ConfigParseError.single(filename, six.text_type(error))

    collector = _Collector()
    for key in sorted(set(document) - _TABLES):
        collector.add(key, "unknown table")
    base = None  # type: Optional[ModelConfig]
    try:
        base = ModelConfig.from_mapping(collector.table(document, "model"))
    except errors.ConfigError as error:
        collector.extend(error)
    spectrum = _parse_spectrum(collector, document)
    variants = _parse_variants(collector, document, base)
    sweeps = _parse_sweeps(collector, document, variants)

    run = collector.table(document, "run")
    outputs = collector.outputs(run, "run")
    workers = run.pop("workers", None)
    if workers is not None and (
        isinstance(workers, bool) or not isinstance(workers, int) or workers < 0
    ):
        collector.add("run.workers", "expected an integer >= 0")
        workers = None
    collector.unknown(run, "run")
    if not sweeps:
        if not outputs and not collector.diagnostics:
            collector.add("run.outputs", "a run without sweeps needs outputs")
        _check_outputs(collector, "run.outputs", outputs, variants)
    tolerances = _parse_tolerances(collector, document)

    if collector.diagnostics:
        raise errors.ConfigError(collector.diagnostics)
    assert base is not None
    return RunConfig(
        base, spectrum, variants, sweeps, outputs, workers, tolerances, source=text
    )


def load_run_config(location):
    # type: (Text) -> RunConfig
    """Load a run file from a path or a ``recipe://<name>`` URL.

    Raises:
        ~uscqed.errors.RecipeNotFound: for an unknown recipe name.
        ~uscqed.errors.ConfigError: if the file cannot be read or is
            invalid.

    """
    from fs import open_fs
    from fs.errors import FSError
    from fs.path import split

    from .recipes import registry

    if location.startswith(registry.protocol):
        name = location[len(registry.protocol) :]
        return parse_run_config(registry.get_recipe(name), filename=location)
    directory, filename = split(location)
    try:
        with open_fs(directory or ".") as run_fs:
            text = run_fs.readtext(filename, encoding="utf-8")
    except FSError as error:
        raise errors.ConfigError.single(location, "could not read: {}".format(error))
    return parse_run_config(text, filename=location)
