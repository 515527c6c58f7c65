"""System Hamiltonians and cavity field operators in both gauges.

Every builder takes a `ModelConfig` and returns a `GaugeModel`: the
Hermitian Hamiltonian, the field operator ``Pi`` that couples to the
cavity bath and is measured by the detectors, and the corrected cavity
operator it derives from.

The dipole-gauge builds write the light-matter coupling of emitter
``k`` as ``(i g_k a^dagger - i g_k^* a) sigma_x,k``. With
``S = sum_k eta_k sigma_x,k`` the dipole Hamiltonian equals
``omega_c a'^dagger a'`` plus the bare atoms, where ``a' = a + i S``,
and the field operator is ``Pi^D = i(a'^dagger - a')``. The gauge-fixed
Coulomb builds are the image of the dipole build under the unitary
``exp(i sum_k Theta_k sigma_x,k)``, with the quadrature
``Theta_k = Re(eta_k)(a + a^dagger) + Im(eta_k) i(a^dagger - a)``; the
atomic operators become trigonometric functions of ``Theta_k``,
evaluated on the truncated cavity by Hermitian function calculus, and
the field operator is the bare ``Pi^C = i(a^dagger - a)``.

"""

from __future__ import absolute_import, division, unicode_literals

import typing

import cmath
import dataclasses
import enum
import hashlib
import json
import logging
import math

import numpy
import scipy.linalg

from . import errors
from ._repr import make_repr
from .constants import (
    DEFAULT_M_DRESSED,
    DEFAULT_N_FOCK,
    DEFAULT_WINDOW_FACTOR,
    SENSOR_COUPLING_WARNING,
)
from .enums import BathKind, Channel, Factor, Gauge, Model
from .error_tools import convert_linalg_errors
from .hilbert import (
    Operator,
    SpaceLayout,
    annihilation,
    cavity_annihilation_matrix,
    embed,
    operator_function,
    pauli,
)
from .lrucache import LRUCache

if typing.TYPE_CHECKING:
    from typing import Any, Dict, List, Mapping, Optional, Sequence, Text, Tuple

    from .errors import Diagnostic

    Emitter = Tuple[Factor, float, complex]


__all__ = [
    "GaugeModel",
    "ModelConfig",
    "build_gdm",
    "build_jcm",
    "build_model",
    "build_qrm_coulomb",
    "build_qrm_dipole",
    "build_saa",
    "convergence_check",
    "gauge_transform_check",
    "lowest_energies",
]

log = logging.getLogger("uscqed.hamiltonian")

_FREQUENCIES = ("omega_c", "omega_a", "omega_b", "omega_s")
_COUPLINGS = ("g_a", "g_b", "g_s")
_RATES = ("kappa", "gamma_a", "gamma_b", "gamma_s", "P_inc")
_ENUMS = {
    "model": Model,
    "gauge": Gauge,
    "bath_cav": BathKind,
    "bath_atom": BathKind,
    "bath_sensor": BathKind,
}
_BOOLS = ("corrected", "relative_to_g", "secular")
_INTS = ("N_fock", "M_dressed")


@dataclasses.dataclass(frozen=True)
class ModelConfig(object):
    """Physical parameters of one simulation.

    Frequencies and couplings are in units of the cavity frequency.
    When ``relative_to_g`` is set, the rates ``kappa``, ``gamma_*``,
    ``P_inc`` and the sensor coupling ``g_s`` are multiples of ``g_a``.
    ``phi_b`` is the phase of the second coupling in units of pi.

    Raises:
        ~uscqed.errors.ConfigError: with one diagnostic per invalid
            field.

    """

    model: Model = Model.qrm
    gauge: Gauge = Gauge.dipole
    corrected: bool = True
    omega_c: float = 1.0
    omega_a: float = 1.0
    omega_b: float = 1.0
    omega_s: float = 1.0
    g_a: float = 0.5
    g_b: float = 0.0
    g_s: float = 0.0
    phi_b: float = 0.0
    kappa: float = 0.25
    gamma_a: float = 0.005
    gamma_b: float = 0.005
    gamma_s: float = 0.005
    P_inc: float = 0.01
    relative_to_g: bool = True
    bath_cav: BathKind = BathKind.ohmic
    bath_atom: BathKind = BathKind.ohmic
    bath_sensor: BathKind = BathKind.ohmic
    N_fock: int = DEFAULT_N_FOCK
    M_dressed: int = DEFAULT_M_DRESSED
    secular: bool = False
    window_factor: typing.Optional[float] = DEFAULT_WINDOW_FACTOR

    def __post_init__(self):
        problems = self.diagnose()
        if problems:
            raise errors.ConfigError(problems)

    def __repr__(self):
        defaults = ModelConfig.__dataclass_fields__
        return make_repr(
            "ModelConfig",
            **{
                name: (getattr(self, name), defaults[name].default)
                for name in defaults
            }
        )

    @classmethod
    def from_mapping(cls, mapping, path="model", base=None):
        # type: (Mapping[Text, Any], Text, Optional[ModelConfig]) -> ModelConfig
        """Create a config from a mapping of field names to values.

        Arguments:
            mapping (dict): field values; enums given by their string
                value.
            path (str): dotted prefix used in diagnostics.
            base (ModelConfig, optional): config supplying unset fields.

        Raises:
            ~uscqed.errors.ConfigError: listing every unknown key,
                wrongly typed value and violated constraint.

        """
        problems = []  # type: List[Diagnostic]
        values = {}  # type: Dict[Text, Any]
        fields = cls.__dataclass_fields__
        for key, value in mapping.items():
            where = "{}.{}".format(path, key)
            if key not in fields:
                problems.append(errors.Diagnostic(where, "unknown field"))
                continue
            try:
                values[key] = _coerce(key, value)
            except (TypeError, ValueError) as error:
                problems.append(errors.Diagnostic(where, str(error)))
        if problems:
            raise errors.ConfigError(problems)
        try:
            if base is None:
                return cls(**values)
            return dataclasses.replace(base, **values)
        except errors.ConfigError as error:
            raise errors.ConfigError(
                errors.Diagnostic(
                    "{}.{}".format(path, field.split(".", 1)[-1]), message
                )
                for field, message in error.diagnostics
            )

    def diagnose(self, path="model"):
        # type: (Text) -> List[Diagnostic]
        """Collect every constraint violation of this config."""
        problems = []

        def problem(field, message):
            problems.append(errors.Diagnostic("{}.{}".format(path, field), message))

        for name in _FREQUENCIES + _COUPLINGS + _RATES + ("phi_b",):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                problem(name, "must be a finite number, got {!r}".format(value))
                return problems
        for name in _FREQUENCIES:
            if getattr(self, name) <= 0:
                problem(name, "frequencies must be > 0")
        for name in _COUPLINGS + _RATES:
            if getattr(self, name) < 0:
                problem(name, "must be >= 0")
        for name, kind in _ENUMS.items():
            if not isinstance(getattr(self, name), kind):
                problem(name, "expected one of {}".format(", ".join(kind.choices())))
        if problems:
            return problems
        if self.N_fock < 2:
            problem("N_fock", "must be >= 2")
        if self.M_dressed < 1:
            problem("M_dressed", "must be >= 1")
        elif self.N_fock >= 2 and self.M_dressed > self.total_dim:
            problem(
                "M_dressed",
                "must not exceed the Hilbert-space dimension {}".format(
                    self.total_dim
                ),
            )
        if self.window_factor is not None and not self.window_factor > 0:
            problem("window_factor", "must be > 0 or unset")
        if self.model.rwa and self.effective_gauge is Gauge.coulomb:
            problem("gauge", "rotating-wave models are defined in the dipole gauge")
        if (
            self.effective_gauge is Gauge.coulomb
            and not self.gauge_corrected
            and abs(self.eta_b.imag) > 1e-15
        ):
            problem("phi_b", "the naive Coulomb build requires a real g_b")
        return problems

    def replace(self, **changes):
        # type: (**Any) -> ModelConfig
        """Get a copy with some fields changed."""
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        # type: () -> Dict[Text, Any]
        """Get a JSON-compatible mapping of every field."""
        result = {}
        for name in self.__dataclass_fields__:
            value = getattr(self, name)
            result[name] = value.value if isinstance(value, enum.Enum) else value
        return result

    def digest(self):
        # type: () -> Text
        """Get a stable SHA-256 digest of the canonical field values."""
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    @property
    def effective_gauge(self):
        # type: () -> Gauge
        """`Gauge`: the gauge the model is built in."""
        if self.model is Model.qrm_naive_coulomb:
            return Gauge.coulomb
        return self.gauge

    @property
    def gauge_corrected(self):
        # type: () -> bool
        """`bool`: whether the gauge-corrected construction is used."""
        return self.corrected and self.model is not Model.qrm_naive_coulomb

    @property
    def layout(self):
        # type: () -> SpaceLayout
        """`SpaceLayout`: the Hilbert space of the model."""
        return SpaceLayout.build(self.N_fock, atoms=self.model.atoms)

    @property
    def total_dim(self):
        # type: () -> int
        """`int`: the dimension of the bare Hilbert space."""
        return self.N_fock * 2 ** len(self.model.atoms)

    @property
    def eta_a(self):
        # type: () -> float
        """`float`: normalised coupling of atom a."""
        return self.g_a / self.omega_c

    @property
    def g_b_complex(self):
        # type: () -> complex
        """`complex`: the coupling of atom b including its phase."""
        return self.g_b * cmath.exp(1j * math.pi * self.phi_b)

    @property
    def eta_b(self):
        # type: () -> complex
        """`complex`: normalised coupling of atom b."""
        return self.g_b_complex / self.omega_c

    @property
    def sensor_coupling(self):
        # type: () -> float
        """`float`: the absolute sensor coupling."""
        return self.g_s * self.g_a if self.relative_to_g else self.g_s

    @property
    def eta_s(self):
        # type: () -> float
        """`float`: normalised coupling of the sensor."""
        return self.sensor_coupling / self.omega_c

    def rate(self, name):
        # type: (Text) -> float
        """Get an absolute rate (``kappa``, ``gamma_a`` ... ``P_inc``)."""
        if name not in _RATES:
            raise KeyError(name)
        value = getattr(self, name)
        return value * self.g_a if self.relative_to_g else value

    def emitters(self):
        # type: () -> List[Emitter]
        """Get ``(factor, frequency, eta)`` for every atomic factor."""
        table = {
            Factor.atom_a: (self.omega_a, complex(self.eta_a)),
            Factor.atom_b: (self.omega_b, self.eta_b),
            Factor.sensor: (self.omega_s, complex(self.eta_s)),
        }
        return [(factor,) + table[factor] for factor in self.model.atoms]


def _coerce(key, value):
    # type: (Text, Any) -> Any
    if key in _ENUMS:
        kind = _ENUMS[key]
        if isinstance(value, kind):
            return value
        try:
            return kind(value)
        except ValueError:
            raise ValueError(
                "expected one of {}, got {!r}".format(", ".join(kind.choices()), value)
            )
    if key in _BOOLS:
        if not isinstance(value, bool):
            raise TypeError("expected true or false, got {!r}".format(value))
        return value
    if key in _INTS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError("expected an integer, got {!r}".format(value))
        return value
    if key == "window_factor" and value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError("expected a number, got {!r}".format(value))
    return float(value)


class GaugeModel(object):
    """A system Hamiltonian with its field operators.

    Attributes:
        H (Operator): the Hermitian system Hamiltonian.
        Pi (Operator): the field operator coupling to the cavity bath.
        a_corrected (Operator): the cavity operator ``Pi`` derives from.
        layout (SpaceLayout): the Hilbert space.
        config (ModelConfig): the parameters the model was built from.
        gauge (Gauge): the gauge of ``H``.

    """

    def __init__(self, H, Pi, a_corrected, config, gauge):
        # type: (Operator, Operator, Operator, ModelConfig, Gauge) -> None
        self.H = H
        self.Pi = Pi
        self.a_corrected = a_corrected
        self.layout = H.layout
        self.config = config
        self.gauge = gauge

    def __repr__(self):
        return make_repr(
            "GaugeModel", str(self.config.model), str(self.gauge), self.layout
        )

    def channel_operator(self, channel):
        # type: (Channel) -> Operator
        """Get the system operator of a dissipation channel.

        Raises:
            ~uscqed.errors.LayoutError: if the channel's factor is not
                part of the model.

        """
        channel = Channel(channel)
        if channel is Channel.cav:
            return self.Pi
        return pauli(self.layout, "x", channel.factor)


# --- building blocks ---------------------------------------------------------

_trig_cache = LRUCache(64)  # type: LRUCache[Tuple[int, float, float], Tuple[numpy.ndarray, numpy.ndarray]]


def _quadrature_trig(n_fock, eta):
    # type: (int, complex) -> Tuple[numpy.ndarray, numpy.ndarray]
    """Get cos and sin of ``2 Theta`` on the truncated cavity."""

    def compute():
        a = cavity_annihilation_matrix(n_fock)
        ad = a.conj().T
        theta = eta.real * (a + ad) + eta.imag * 1j * (ad - a)
        with convert_linalg_errors("quadrature function", errors.EigensolverFailed):
            cos = operator_function(theta, lambda x: numpy.cos(2 * x))
            sin = operator_function(theta, lambda x: numpy.sin(2 * x))
        cos = 0.5 * (cos + cos.conj().T)
        sin = 0.5 * (sin + sin.conj().T)
        cos.flags.writeable = False
        sin.flags.writeable = False
        return cos, sin

    return _trig_cache.get_or_compute((n_fock, eta.real, eta.imag), compute)


def _hermitian(H):
    # type: (Operator) -> Operator
    checked = Operator(H.layout, H.data, hermitian=True)
    return Operator(H.layout, 0.5 * (checked.data + checked.data.conj().T))


def _cavity_terms(layout, omega_c):
    # type: (SpaceLayout, float) -> Tuple[Operator, Operator]
    a = annihilation(layout)
    return a, omega_c * (a.dag() @ a)


def _dipole_build(config, rwa, corrected):
    # type: (ModelConfig, bool, bool) -> GaugeModel
    layout = config.layout
    emitters = config.emitters()
    a, H = _cavity_terms(layout, config.omega_c)
    ad = a.dag()
    S = Operator(layout, numpy.zeros((layout.total_dim,) * 2))
    for factor, omega, eta in emitters:
        g = eta * config.omega_c
        H = H + (omega / 2) * pauli(layout, "z", factor)
        if rwa:
            raising = ad @ pauli(layout, "minus", factor)
            coupling = 1j * g * raising - 1j * g.conjugate() * raising.dag()
        else:
            field = 1j * g * ad - 1j * g.conjugate() * a
            coupling = field @ pauli(layout, "x", factor)
        H = H + coupling
        S = S + eta * pauli(layout, "x", factor)
    if corrected:
        for (first, _, eta_k), (second, _, eta_l) in _pairs(emitters):
            strength = 2 * config.omega_c * (eta_k.conjugate() * eta_l).real
            if rwa:
                exchange = pauli(layout, "plus", first) @ pauli(layout, "minus", second)
                direct = exchange + exchange.dag()
            else:
                direct = pauli(layout, "x", first) @ pauli(layout, "x", second)
            H = H + strength * direct
        a_corrected = a + 1j * S
    else:
        a_corrected = a
    Pi = 1j * (a_corrected.dag() - a_corrected)
    return GaugeModel(_hermitian(H), _hermitian(Pi), a_corrected, config, Gauge.dipole)


def _coulomb_fixed_build(config):
    # type: (ModelConfig) -> GaugeModel
    layout = config.layout
    emitters = config.emitters()
    a, H = _cavity_terms(layout, config.omega_c)
    for index, (factor, omega, eta) in enumerate(emitters):
        cos, sin = _quadrature_trig(layout.n_fock, eta)
        cos_phi = embed(cos, Factor.cavity, layout)
        sin_phi = embed(sin, Factor.cavity, layout)
        for other, _, eta_other in emitters[:index] + emitters[index + 1 :]:
            # phase of the quadrature commutator shifts the angle by a sigma_x
            shift = 2 * (eta.conjugate() * eta_other).imag
            if shift:
                sigma = pauli(layout, "x", other)
                cos_phi, sin_phi = (
                    math.cos(shift) * cos_phi - math.sin(shift) * (sin_phi @ sigma),
                    math.cos(shift) * sin_phi + math.sin(shift) * (cos_phi @ sigma),
                )
        H = H + (omega / 2) * (
            pauli(layout, "z", factor) @ cos_phi + pauli(layout, "y", factor) @ sin_phi
        )
    Pi = 1j * (a.dag() - a)
    return GaugeModel(_hermitian(H), _hermitian(Pi), a, config, Gauge.coulomb)


def _coulomb_naive_build(config):
    # type: (ModelConfig) -> GaugeModel
    layout = config.layout
    a, H = _cavity_terms(layout, config.omega_c)
    x = a + a.dag()
    diamagnetic = 0.0
    for factor, omega, eta in config.emitters():
        g_coulomb = eta.real * omega
        H = H + (omega / 2) * pauli(layout, "z", factor)
        H = H + g_coulomb * (x @ pauli(layout, "y", factor))
        diamagnetic += g_coulomb ** 2 / omega
    H = H + diamagnetic * (x @ x)
    Pi = 1j * (a.dag() - a)
    return GaugeModel(_hermitian(H), _hermitian(Pi), a, config, Gauge.coulomb)


def _pairs(items):
    # type: (Sequence[Any]) -> List[Tuple[Any, Any]]
    return [
        (items[i], items[j])
        for i in range(len(items))
        for j in range(i + 1, len(items))
    ]


def _require_family(config, models, builder):
    # type: (ModelConfig, Tuple[Model, ...], Text) -> None
    if config.model not in models:
        raise errors.ConfigError.single(
            "model.model",
            "{} needs one of {}, got {}".format(
                builder, ", ".join(map(str, models)), config.model
            ),
        )


_SINGLE_ATOM = (Model.qrm, Model.jcm, Model.qrm_naive_coulomb)
_SENSOR = (Model.saa, Model.saa_rwa)
_TWO_ATOM = (Model.gdm, Model.gdm_rwa)


# --- public builders -----------------------------------------------------------


def build_qrm_dipole(config):
    # type: (ModelConfig) -> GaugeModel
    """Build the dipole-gauge quantum Rabi model.

    ``H = omega_c a^dagger a + omega_a/2 sigma_z + i g (a^dagger - a) sigma_x``
    up to a constant; ``config.corrected=False`` keeps the bare field
    operator instead of the corrected one.

    """
    _require_family(config, _SINGLE_ATOM, "build_qrm_dipole")
    return _dipole_build(config, rwa=False, corrected=config.corrected)


def build_jcm(config):
    # type: (ModelConfig) -> GaugeModel
    """Build the Jaynes-Cummings model, the rotating-wave QRM."""
    _require_family(config, _SINGLE_ATOM, "build_jcm")
    return _dipole_build(config, rwa=True, corrected=config.corrected)


def build_qrm_coulomb(config, fixed=True):
    # type: (ModelConfig, bool) -> GaugeModel
    """Build the Coulomb-gauge quantum Rabi model.

    Arguments:
        config (ModelConfig): the parameters.
        fixed (bool): `True` for the gauge-fixed Hamiltonian with
            trigonometric atomic operators, `False` for the naive
            minimal-coupling truncation with its ``A^2`` term.

    """
    _require_family(config, _SINGLE_ATOM, "build_qrm_coulomb")
    return _coulomb_fixed_build(config) if fixed else _coulomb_naive_build(config)


def _warn_sensor(config):
    # type: (ModelConfig) -> None
    if config.sensor_coupling > SENSOR_COUPLING_WARNING * config.g_a:
        log.warning(
            "sensor coupling %.3g exceeds %g g_a; the sensor may perturb the system",
            config.sensor_coupling,
            SENSOR_COUPLING_WARNING,
        )


def build_saa(config, gauge=None, rwa=None):
    # type: (ModelConfig, Optional[Gauge], Optional[bool]) -> GaugeModel
    """Build the QRM with a weakly coupled sensing atom.

    Arguments:
        config (ModelConfig): the parameters; ``omega_s`` and ``g_s``
            describe the sensor.
        gauge (Gauge, optional): overrides ``config.gauge``.
        rwa (bool, optional): overrides the rotating-wave choice implied
            by ``config.model``.

    """
    _require_family(config, _SENSOR, "build_saa")
    _warn_sensor(config)
    return _two_emitter_build(config, gauge, rwa)


def build_gdm(config, gauge=None, rwa=None):
    # type: (ModelConfig, Optional[Gauge], Optional[bool]) -> GaugeModel
    """Build the two-atom generalised Dicke model.

    The coupling of atom b is ``g_b exp(i pi phi_b)``; the direct
    dipole-dipole term is ``2 omega_c Re(eta_a^* eta_b) sigma_x,a sigma_x,b``.

    """
    _require_family(config, _TWO_ATOM, "build_gdm")
    return _two_emitter_build(config, gauge, rwa)


def _two_emitter_build(config, gauge, rwa):
    # type: (ModelConfig, Optional[Gauge], Optional[bool]) -> GaugeModel
    gauge = Gauge(gauge) if gauge is not None else config.effective_gauge
    rwa = config.model.rwa if rwa is None else rwa
    if gauge is Gauge.dipole:
        return _dipole_build(config, rwa=rwa, corrected=config.corrected)
    if rwa:
        raise errors.ConfigError.single(
            "model.gauge", "rotating-wave models are defined in the dipole gauge"
        )
    if config.corrected:
        return _coulomb_fixed_build(config)
    return _coulomb_naive_build(config)


def build_model(config):
    # type: (ModelConfig) -> GaugeModel
    """Build the model named by ``config.model`` in ``config.gauge``."""
    model = config.model
    if model is Model.qrm_naive_coulomb:
        return build_qrm_coulomb(config, fixed=False)
    if model is Model.jcm:
        return build_jcm(config)
    if model is Model.qrm:
        if config.gauge is Gauge.dipole:
            return build_qrm_dipole(config)
        return build_qrm_coulomb(config, fixed=config.corrected)
    if model in _SENSOR:
        return build_saa(config)
    return build_gdm(config)


# --- checks --------------------------------------------------------------------


@errors.EigensolverFailed.catch_all
def lowest_energies(model, count):
    # type: (GaugeModel, int) -> numpy.ndarray
    """Get the ``count`` lowest eigenvalues, ground state aligned to zero."""
    count = min(count, model.layout.total_dim)
    with convert_linalg_errors("lowest_energies", errors.EigensolverFailed):
        values = scipy.linalg.eigh(
            model.H.data, eigvals_only=True, subset_by_index=[0, count - 1]
        )
    return values - values[0]


def gauge_transform_check(modelD, modelC, levels=None):
    # type: (GaugeModel, GaugeModel, Optional[int]) -> float
    """Get the largest eigenvalue discrepancy between two gauges.

    Arguments:
        modelD (GaugeModel): the dipole-gauge build.
        modelC (GaugeModel): the Coulomb-gauge build of the same config.
        levels (int, optional): number of levels compared, defaults to
            ``M_dressed`` of the dipole config.

    Returns:
        float: ``max_j |E_j^D - E_j^C|`` after aligning both ground
        states to zero.

    """
    if modelD.layout != modelC.layout:
        raise errors.LayoutError.single(
            "layout", "models act on different spaces: {!r} and {!r}".format(
                modelD.layout, modelC.layout
            )
        )
    levels = levels or modelD.config.M_dressed
    energies_d = lowest_energies(modelD, levels)
    energies_c = lowest_energies(modelC, levels)
    return float(numpy.abs(energies_d - energies_c).max())


def convergence_check(config, levels=10, builder=build_model):
    # type: (ModelConfig, int, Any) -> float
    """Get the eigenvalue change when the Fock truncation is doubled."""
    coarse = lowest_energies(builder(config), levels)
    fine = lowest_energies(builder(config.replace(N_fock=2 * config.N_fock)), levels)
    change = float(numpy.abs(coarse - fine).max())
    log.debug(
        "N_fock %d -> %d changes energies by %.3e",
        config.N_fock,
        2 * config.N_fock,
        change,
    )
    return change
