"""Cavity emission spectra.

Two readouts are available. `spectrum_qrt` Fourier transforms the
steady-state field correlation with the quantum regression theorem,
one linear solve per frequency. `spectrum_saa` sweeps a weakly coupled
sensing atom through the spectrum and records its steady excitation.
`spectrum_time_domain` computes the regression-theorem spectrum by
explicit time integration and is used to check the resolvent form.

"""

from __future__ import absolute_import, division, unicode_literals

import typing

import logging
import math
import warnings
from collections import namedtuple

import numpy
import scipy.integrate
import scipy.linalg
import scipy.signal

from . import errors
from ._bulk import JobPool
from ._repr import make_repr
from .constants import (
    CLIP_TOLERANCE,
    DEFAULT_OMEGA_MAX,
    DEFAULT_OMEGA_MIN,
    DEFAULT_OMEGA_POINTS,
    NONINVASIVE_MARGIN,
    TRANSITION_LABELS,
)
from .dressed import diagonalize, quadrature_rates, state_labels
from .enums import BathKind, Channel, Factor, Method, Model
from .gme import assemble_liouvillian, steady_state
from .hamiltonian import build_model, build_saa
from .hilbert import pauli

if typing.TYPE_CHECKING:
    from typing import Any, Dict, List, Optional, Sequence, Text

    from .dressed import DressedBasis, QuadratureRate, StateLabels, TransitionSet
    from .enums import Gauge
    from .gme import Liouvillian
    from .hamiltonian import GaugeModel, ModelConfig


__all__ = [
    "Peak",
    "SpectrumResult",
    "annotate_peaks",
    "cavity_spectrum",
    "default_grid",
    "noninvasive_bound",
    "normalize",
    "photon_flux_table",
    "probed_system",
    "spectrum_qrt",
    "spectrum_saa",
    "spectrum_time_domain",
]

log = logging.getLogger("uscqed.spectra")


#: A spectral peak, labelled with the transition it is closest to.
Peak = namedtuple("Peak", ["omega", "intensity", "label", "j", "k", "rate"])


class SpectrumResult(object):
    """A spectrum sampled on a frequency grid.

    Attributes:
        omega_grid (numpy.ndarray): frequencies in units of omega_c.
        intensity (numpy.ndarray): the spectrum, NaN at failed points.
        method (Method): how the spectrum was computed.
        gauge (Gauge): the gauge of the model.
        config_hash (str): digest of the model config.
        gaps (list): grid indices where the computation failed.
        peaks (list): `Peak` annotations, filled by `annotate_peaks`.
        metadata (dict): extra JSON-compatible information.

    """

    def __init__(
        self,
        omega_grid,  # type: numpy.ndarray
        intensity,  # type: numpy.ndarray
        method,  # type: Method
        gauge,  # type: Gauge
        config_hash,  # type: Text
        gaps=None,  # type: Optional[List[int]]
        metadata=None,  # type: Optional[Dict[Text, Any]]
    ):
        # type: (...) -> None
        self.omega_grid = numpy.asarray(omega_grid, dtype=float)
        self.intensity = numpy.asarray(intensity, dtype=float)
        self.method = Method(method)
        self.gauge = gauge
        self.config_hash = config_hash
        self.gaps = list(gaps or [])
        self.peaks = []  # type: List[Peak]
        self.metadata = dict(metadata or {})

    def __repr__(self):
        return make_repr(
            "SpectrumResult", str(self.method), str(self.gauge), self.intensity
        )

    def __len__(self):
        return len(self.omega_grid)

    def copy(self, intensity=None):
        # type: (Optional[numpy.ndarray]) -> SpectrumResult
        """Get a copy, optionally with new intensities."""
        result = SpectrumResult(
            self.omega_grid,
            self.intensity if intensity is None else intensity,
            self.method,
            self.gauge,
            self.config_hash,
            gaps=self.gaps,
            metadata=self.metadata,
        )
        result.peaks = list(self.peaks)
        return result

    def to_dict(self):
        # type: () -> Dict[Text, Any]
        """Get the JSON sidecar describing the spectrum."""
        return {
            "method": self.method.value,
            "gauge": str(self.gauge),
            "config_hash": self.config_hash,
            "gaps": self.gaps,
            "peaks": [peak._asdict() for peak in self.peaks],
            "metadata": self.metadata,
        }


def default_grid(
    omega_min=DEFAULT_OMEGA_MIN,
    omega_max=DEFAULT_OMEGA_MAX,
    n_points=DEFAULT_OMEGA_POINTS,
):
    # type: (float, float, int) -> numpy.ndarray
    """Get an evenly spaced emission-frequency grid."""
    return numpy.linspace(omega_min, omega_max, n_points)


def _clip(intensity, operation):
    # type: (numpy.ndarray, Text) -> numpy.ndarray
    finite = intensity[numpy.isfinite(intensity)]
    if not len(finite):
        return intensity
    limit = CLIP_TOLERANCE * max(float(numpy.abs(finite).max()), 1e-300)
    tiny = (intensity < 0) & (intensity >= -limit)
    if tiny.any():
        log.debug("%s: clipped %d tiny negative samples", operation, int(tiny.sum()))
        intensity = numpy.where(tiny, 0.0, intensity)
    large = intensity < -limit
    if large.any():
        log.warning(
            "%s: %d samples are negative beyond tolerance (min %.3e)",
            operation,
            int(large.sum()),
            float(intensity[large].min()),
        )
    return intensity


def _correlation_operands(L, rho_ss, transitions_cav):
    # type: (Liouvillian, numpy.ndarray, Optional[TransitionSet]) -> Any
    if transitions_cav is None:
        transitions_cav = L.transitions[Channel.cav]
    rho_ss = numpy.asarray(rho_ss)
    if rho_ss.shape != (L.size, L.size) or transitions_cav.size != L.size:
        raise errors.GaugeMismatch.single(
            "rho_ss", "steady state and transitions must match the Liouvillian"
        )
    x_plus = transitions_cav.total_x_plus()
    x_minus = transitions_cav.total_x_minus()
    # Tr(X+ Y) as a dot product with vec(Y)
    readout = x_plus.T.ravel()
    return readout, L.vec(rho_ss @ x_minus)


def spectrum_qrt(L, rho_ss, transitions_cav=None, omega_grid=None):
    # type: (Liouvillian, numpy.ndarray, Optional[TransitionSet], Optional[Sequence[float]]) -> SpectrumResult
    """Get the cavity spectrum from the quantum regression theorem.

    ``S(w) = Re Tr{X+ [-(L + i w)]^-1 (rho_ss X-)}``, the Fourier
    transform of ``<X-(0) X+(tau)>`` over ``tau >= 0``.

    Arguments:
        L (Liouvillian): the generator.
        rho_ss (numpy.ndarray): its steady state.
        transitions_cav (TransitionSet, optional): the cavity
            transitions, defaults to those stored on ``L``.
        omega_grid (array_like, optional): emission frequencies,
            defaults to `default_grid`.

    Raises:
        ~uscqed.errors.SingularResolvent: if ``L + i w`` is singular.

    """
    grid = default_grid() if omega_grid is None else numpy.asarray(omega_grid, float)
    readout, source = _correlation_operands(L, rho_ss, transitions_cav)
    identity = numpy.eye(L.size * L.size)
    intensity = numpy.empty(len(grid))
    for index, omega in enumerate(grid):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
                response = scipy.linalg.solve(
                    -(L.matrix + 1j * omega * identity), source
                )
        except (
            numpy.linalg.LinAlgError,
            scipy.linalg.LinAlgWarning,
            ValueError,
        ) as error:
            raise errors.SingularResolvent(float(omega), exc=error)
        value = readout @ response
        if not numpy.isfinite(value):
            raise errors.SingularResolvent(float(omega))
        intensity[index] = value.real
    return SpectrumResult(
        grid, _clip(intensity, "spectrum_qrt"), Method.qrt, L.gauge, L.digest
    )


def spectrum_time_domain(
    L,  # type: Liouvillian
    rho_ss,  # type: numpy.ndarray
    transitions_cav=None,  # type: Optional[TransitionSet]
    omega_grid=None,  # type: Optional[Sequence[float]]
    t_max=None,  # type: Optional[float]
    n_steps=20000,  # type: int
):
    # type: (...) -> SpectrumResult
    """Get the regression-theorem spectrum by explicit time integration.

    The correlation ``<X-(0) X+(tau)>`` is propagated with exact steps
    of ``exp(L dt)`` up to ``t_max`` (default ``100 / kappa``) and
    Fourier transformed with Simpson's rule.

    """
    grid = default_grid() if omega_grid is None else numpy.asarray(omega_grid, float)
    if t_max is None:
        kappa = dict(L.channels).get(Channel.cav.value)
        if kappa is None or kappa.base_rate <= 0:
            raise ValueError("t_max is required without cavity loss")
        t_max = 100.0 / kappa.base_rate
    readout, vector = _correlation_operands(L, rho_ss, transitions_cav)
    times = numpy.linspace(0.0, t_max, n_steps + 1)
    step = scipy.linalg.expm(L.matrix * (times[1] - times[0]))
    correlation = numpy.empty(len(times), dtype=complex)
    for index in range(len(times)):
        correlation[index] = readout @ vector
        vector = step @ vector
    intensity = numpy.array(
        [
            scipy.integrate.simpson(
                numpy.exp(1j * omega * times) * correlation, x=times
            ).real
            for omega in grid
        ]
    )
    return SpectrumResult(
        grid,
        _clip(intensity, "spectrum_time_domain"),
        Method.time_domain,
        L.gauge,
        L.digest,
        metadata={"t_max": t_max, "n_steps": n_steps},
    )


def _sensor_excitation(config):
    # type: (ModelConfig) -> float
    model = build_saa(config)
    basis = diagonalize(model)
    rho = steady_state(assemble_liouvillian(model, basis))
    excited = pauli(model.layout, "plus", Factor.sensor) @ pauli(
        model.layout, "minus", Factor.sensor
    )
    return float(numpy.trace(rho @ basis.project(excited)).real)


def probed_system(config):
    # type: (ModelConfig) -> ModelConfig
    """Get the single-atom config a sensing atom probes."""
    return config.replace(model=Model.jcm if config.model.rwa else Model.qrm, g_s=0.0)


def noninvasive_bound(config):
    # type: (ModelConfig) -> float
    """Get ``sqrt(gamma_s R / 2)`` for the system the sensor probes.

    ``R`` is the smallest nonzero cavity photodetection rate of the
    system without the sensor.

    """
    model = build_model(probed_system(config))
    rates = [
        row.rate
        for row in quadrature_rates(diagonalize(model), model)
        if row.rate > 1e-12
    ]
    if not rates:
        return math.inf
    return math.sqrt(config.rate("gamma_s") * min(rates) / 2)


def spectrum_saa(config_base, omega_s_grid=None, num_workers=0):
    # type: (ModelConfig, Optional[Sequence[float]], int) -> SpectrumResult
    """Get the spectrum seen by a sensing atom.

    For every sensor frequency the SAA model is rebuilt, its steady
    state solved, and the sensor excitation ``<sigma+_s sigma-_s>`` is
    recorded. Points whose solve fails are NaN and listed in ``gaps``.

    Arguments:
        config_base (ModelConfig): an ``saa`` or ``saa_rwa`` config;
            ``omega_s`` is replaced at every grid point.
        omega_s_grid (array_like, optional): sensor frequencies,
            defaults to `default_grid`.
        num_workers (int): worker threads, 0 solves serially.

    """
    if omega_s_grid is None:
        grid = default_grid()
    else:
        grid = numpy.asarray(omega_s_grid, float)
    if config_base.model not in (Model.saa, Model.saa_rwa):
        raise errors.ConfigError.single(
            "model.model", "sensing-atom spectra need an saa model"
        )
    bound = noninvasive_bound(config_base)
    noninvasive = config_base.sensor_coupling <= NONINVASIVE_MARGIN * bound
    if not noninvasive:
        log.warning(
            "sensor coupling %.3g is not small against sqrt(gamma_s R / 2) = %.3g",
            config_base.sensor_coupling,
            bound,
        )
    with JobPool(num_workers, strict=False) as pool:
        for index, omega_s in enumerate(grid):
            probe = config_base.replace(omega_s=float(omega_s))
            pool.submit(index, _sensor_excitation, probe)
    intensity = numpy.full(len(grid), numpy.nan)
    for index, value in pool.results.items():
        intensity[index] = value
    gaps = sorted(pool.failed)
    for index in gaps:
        log.warning(
            "sensing-atom solve failed at omega_s=%.4f: %s",
            grid[index],
            pool.failed[index],
        )
    return SpectrumResult(
        grid,
        _clip(intensity, "spectrum_saa"),
        Method.saa,
        config_base.effective_gauge,
        config_base.digest(),
        gaps=gaps,
        metadata={"noninvasive": bool(noninvasive), "noninvasive_bound": bound},
    )


def cavity_spectrum(config, omega_grid=None):
    # type: (ModelConfig, Optional[Sequence[float]]) -> SpectrumResult
    """Build, solve and get the regression-theorem spectrum of a config."""
    model = build_model(config)
    basis = diagonalize(model)
    L = assemble_liouvillian(model, basis)
    return spectrum_qrt(L, steady_state(L), omega_grid=omega_grid)


def photon_flux_table(basis, model, bath_cav=None, labels=None):
    # type: (DressedBasis, GaugeModel, Optional[BathKind], Optional[StateLabels]) -> List[QuadratureRate]
    """Get the photodetection rate of every dressed transition.

    Unlike `~uscqed.dressed.quadrature_rates`, the rows name their
    states by label rather than by energy index, so ``(j, k)`` can be
    looked up in the table of key transitions.

    Arguments:
        basis (DressedBasis): the dressed basis of ``model``.
        model (GaugeModel): the model.
        bath_cav (BathKind, optional): overrides the cavity bath.
        labels (StateLabels, optional): the state names, defaults to
            `~uscqed.dressed.state_labels` of the model.

    """
    if labels is None:
        labels = state_labels(model, basis)
    return labels.relabel(quadrature_rates(basis, model, kind=bath_cav))


def annotate_peaks(result, flux_table, prominence=0.01):
    # type: (SpectrumResult, Sequence[QuadratureRate], float) -> List[Peak]
    """Find the peaks of a spectrum and label them.

    Each peak gets the label of the nearest key transition (``A`` for
    ``|1> -> |0>`` and so on, with states named by label) within two
    grid steps, or `None`. The peaks are also stored on ``result.peaks``.

    Arguments:
        result (SpectrumResult): the spectrum.
        flux_table (list): `photon_flux_table` rows of the same model.
        prominence (float): minimum peak prominence relative to the
            largest sample.

    """
    intensity = numpy.nan_to_num(result.intensity, nan=0.0)
    scale = float(intensity.max()) if len(intensity) else 0.0
    if scale <= 0:
        result.peaks = []
        return []
    indices, _ = scipy.signal.find_peaks(intensity, prominence=prominence * scale)
    step = 0.0
    if len(result.omega_grid) > 1:
        step = float(numpy.min(numpy.diff(result.omega_grid)))
    labelled = [row for row in flux_table if (row.j, row.k) in TRANSITION_LABELS]
    peaks = []
    for index in indices:
        omega = float(result.omega_grid[index])
        nearest = min(labelled, key=lambda row: abs(row.omega - omega), default=None)
        if nearest is not None and abs(nearest.omega - omega) <= 2 * step:
            peaks.append(
                Peak(
                    omega,
                    float(intensity[index]),
                    TRANSITION_LABELS[nearest.j, nearest.k],
                    nearest.j,
                    nearest.k,
                    nearest.rate,
                )
            )
        else:
            peaks.append(Peak(omega, float(intensity[index]), None, None, None, None))
    result.peaks = peaks
    return peaks


def normalize(result):
    # type: (SpectrumResult) -> SpectrumResult
    """Get a copy of a spectrum scaled to unit maximum."""
    finite = result.intensity[numpy.isfinite(result.intensity)]
    peak = float(finite.max()) if len(finite) else 0.0
    if peak <= 0:
        return result.copy()
    normalized = result.copy(result.intensity / peak)
    normalized.peaks = [
        item._replace(intensity=item.intensity / peak) for item in result.peaks
    ]
    normalized.metadata["normalized"] = True
    return normalized
