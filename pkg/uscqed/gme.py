"""Generalised master equation in the dressed basis.

Density matrices are ``M x M`` arrays. Superoperators act on their
row-major vectorisation, so ``vec(A rho B) = kron(A, B.T) vec(rho)``.

"""

from __future__ import absolute_import, division, unicode_literals

import typing

import logging

import numpy
import scipy.integrate
import scipy.linalg

from . import errors
from ._repr import make_repr
from .constants import NULL_SPACE_TOLERANCE, POSITIVITY_TOLERANCE
from .dressed import jump_operators
from .enums import BathKind, Channel
from .error_tools import convert_linalg_errors

if typing.TYPE_CHECKING:
    from typing import List, Optional, Text, Tuple, Union

    from .dressed import DressedBasis, TransitionSet
    from .hamiltonian import GaugeModel, ModelConfig


__all__ = [
    "BathSpec",
    "Liouvillian",
    "assemble_liouvillian",
    "bath_for_channel",
    "build_dissipator",
    "build_pump",
    "evolve",
    "steady_state",
]

log = logging.getLogger("uscqed.gme")


class BathSpec(object):
    """A zero-temperature bath with a frequency-dependent rate.

    Arguments:
        kind (BathKind): ``flat`` gives ``base_rate`` at every
            frequency, ``ohmic`` gives ``base_rate * omega / reference``.
        base_rate (float): the rate at the reference frequency.
        reference (float): the reference frequency.

    """

    def __init__(self, kind, base_rate, reference=1.0):
        # type: (BathKind, float, float) -> None
        if base_rate < 0:
            raise ValueError("base_rate must be >= 0")
        if reference <= 0:
            raise ValueError("reference must be > 0")
        self.kind = BathKind(kind)
        self.base_rate = base_rate
        self.reference = reference

    def __repr__(self):
        return make_repr(
            "BathSpec",
            str(self.kind),
            base_rate=(self.base_rate, None),
            reference=(self.reference, 1.0),
        )

    def __eq__(self, other):
        return isinstance(other, BathSpec) and (
            (self.kind, self.base_rate, self.reference)
            == (other.kind, other.base_rate, other.reference)
        )

    def __hash__(self):
        return hash((self.kind, self.base_rate, self.reference))

    def rate(self, omega):
        # type: (Union[float, numpy.ndarray]) -> Union[float, numpy.ndarray]
        """Get the rate at positive frequencies ``omega``."""
        if self.kind is BathKind.ohmic:
            return self.base_rate * numpy.asarray(omega) / self.reference
        return self.base_rate * numpy.ones_like(omega, dtype=float)


def bath_for_channel(config, channel):
    # type: (ModelConfig, Channel) -> BathSpec
    """Get the bath of a dissipation channel from a config."""
    channel = Channel(channel)
    if channel is Channel.cav:
        return BathSpec(config.bath_cav, config.rate("kappa"), config.omega_c)
    if channel is Channel.atom_a:
        return BathSpec(config.bath_atom, config.rate("gamma_a"), config.omega_a)
    if channel is Channel.atom_b:
        return BathSpec(config.bath_atom, config.rate("gamma_b"), config.omega_b)
    return BathSpec(config.bath_sensor, config.rate("gamma_s"), config.omega_c)


def _vec_identity(size):
    # type: (int) -> numpy.ndarray
    return numpy.eye(size, dtype=complex).ravel()


def _pair_superoperator(rows, cols, values, rates, mask, size):
    # type: (numpy.ndarray, numpy.ndarray, numpy.ndarray, numpy.ndarray, numpy.ndarray, int) -> numpy.ndarray
    """Assemble ``sum_pq`` of the pair terms for operators ``v_p |r_p><s_p|``.

    Each allowed pair ``(p, q)`` contributes
    ``(G_p + G_q)/2 A_p rho A_q^dagger - G_p/2 A_q^dagger A_p rho
    - G_q/2 rho A_q^dagger A_p``.

    """
    superop = numpy.zeros((size * size, size * size), dtype=complex)
    p, q = numpy.nonzero(mask)
    if not len(p):
        return superop
    weight = values[p] * values[q].conj()
    # A_p rho A_q^dagger
    numpy.add.at(
        superop,
        (rows[p] * size + rows[q], cols[p] * size + cols[q]),
        0.5 * (rates[p] + rates[q]) * weight,
    )
    # A_q^dagger A_p = conj(v_q) v_p |s_q><s_p| needs r_p == r_q
    touching = rows[p] == rows[q]
    p, q, weight = p[touching], q[touching], weight[touching]
    m = numpy.arange(size)
    left_rows = (cols[q][:, None] * size + m).ravel()
    left_cols = (cols[p][:, None] * size + m).ravel()
    numpy.add.at(
        superop, (left_rows, left_cols), numpy.repeat(-0.5 * rates[p] * weight, size)
    )
    right_rows = (m * size + cols[p][:, None]).ravel()
    right_cols = (m * size + cols[q][:, None]).ravel()
    numpy.add.at(
        superop, (right_rows, right_cols), numpy.repeat(-0.5 * rates[q] * weight, size)
    )
    return superop


def _pair_mask(omegas, window, secular):
    # type: (numpy.ndarray, Optional[float], bool) -> numpy.ndarray
    count = len(omegas)
    if secular:
        return numpy.eye(count, dtype=bool)
    if window is None:
        return numpy.ones((count, count), dtype=bool)
    return numpy.abs(omegas[:, None] - omegas[None, :]) <= window


def build_dissipator(transitions, bath, window=None, secular=False):
    # type: (TransitionSet, BathSpec, Optional[float], bool) -> numpy.ndarray
    """Build the non-secular dissipator of one channel.

    Sums over every pair of transitions ``(p, q)``::

        G(w_p)/2 [X+_p rho X-_q - X-_q X+_p rho]
        + G(w_q)/2 [X+_p rho X-_q - rho X-_q X+_p]

    Arguments:
        transitions (TransitionSet): the channel's transitions.
        bath (BathSpec): the channel's bath.
        window (float, optional): keep only pairs with
            ``|w_p - w_q| <= window``; `None` keeps all pairs.
        secular (bool): keep only ``p == q``.

    Returns:
        numpy.ndarray: the ``M^2 x M^2`` superoperator.

    """
    size = transitions.size
    if not len(transitions) or bath.base_rate == 0:
        return numpy.zeros((size * size, size * size), dtype=complex)
    omegas = transitions.omegas
    return _pair_superoperator(
        transitions.pairs[:, 0],
        transitions.pairs[:, 1],
        transitions.elements,
        numpy.asarray(bath.rate(omegas), dtype=float),
        _pair_mask(omegas, window, secular),
        size,
    )


def build_pump(transitions_cav, P_inc, secular=False):
    # type: (TransitionSet, float, bool) -> numpy.ndarray
    """Build the incoherent pump ``P_inc/2 D[X-_cav]``.

    ``X-_cav`` is the sum of the raising operators of every cavity
    transition and ``D[O] rho = O rho O^dagger - {O^dagger O, rho}/2``.

    """
    if P_inc < 0:
        raise ValueError("P_inc must be >= 0")
    size = transitions_cav.size
    count = len(transitions_cav)
    if not count or P_inc == 0:
        return numpy.zeros((size * size, size * size), dtype=complex)
    return _pair_superoperator(
        transitions_cav.pairs[:, 1],
        transitions_cav.pairs[:, 0],
        transitions_cav.elements.conj(),
        numpy.full(count, 0.5 * P_inc),
        _pair_mask(transitions_cav.omegas, None, secular),
        size,
    )


class Liouvillian(object):
    """A master-equation generator on the dressed basis.

    Attributes:
        matrix (numpy.ndarray): the ``M^2 x M^2`` superoperator.
        size (int): the dressed dimension ``M``.
        channels (list): ``(name, BathSpec)`` for every dissipator,
            the pump is listed as ``("pump", BathSpec)`` with a flat
            rate ``P_inc``.
        gauge (Gauge): the gauge of the model.
        digest (str): digest of the config.
        transitions (dict): the `TransitionSet` of every channel.

    """

    def __init__(self, matrix, size, channels, gauge, digest, transitions):
        self.matrix = matrix
        self.size = size
        self.channels = channels
        self.gauge = gauge
        self.digest = digest
        self.transitions = transitions

    def __repr__(self):
        names = [name for name, _ in self.channels]
        return make_repr("Liouvillian", self.size, names, str(self.gauge))

    def vec(self, rho):
        # type: (numpy.ndarray) -> numpy.ndarray
        """Vectorise a density matrix."""
        return numpy.asarray(rho, dtype=complex).reshape(self.size * self.size)

    def unvec(self, vector):
        # type: (numpy.ndarray) -> numpy.ndarray
        """Reshape a vector back into a matrix."""
        return numpy.asarray(vector).reshape(self.size, self.size)

    def apply(self, rho):
        # type: (numpy.ndarray) -> numpy.ndarray
        """Get ``L rho``."""
        return self.unvec(self.matrix @ self.vec(rho))

    def trace_deviation(self):
        # type: () -> float
        """Get ``||vec(1)^T L|| / ||L||``, zero for a trace-preserving L."""
        norm = numpy.linalg.norm(self.matrix)
        if norm == 0:
            return 0.0
        return float(numpy.linalg.norm(_vec_identity(self.size) @ self.matrix) / norm)

    def eigenvalues(self):
        # type: () -> numpy.ndarray
        """Get the eigenvalues of the superoperator."""
        with convert_linalg_errors("Liouvillian.eigenvalues", errors.EigensolverFailed):
            return scipy.linalg.eigvals(self.matrix)


def assemble_liouvillian(model, basis, config=None):
    # type: (GaugeModel, DressedBasis, Optional[ModelConfig]) -> Liouvillian
    """Assemble the full Liouvillian of a model.

    The coherent part is ``-i[diag(E), rho]``; every channel with a
    positive rate adds its dissipator, and a positive ``P_inc`` adds
    the cavity pump.

    Raises:
        ~uscqed.errors.GaugeMismatch: if ``basis`` was not computed
            from ``model``.

    """
    basis.check_model(model)
    config = model.config if config is None else config
    size = basis.size
    identity = numpy.eye(size)
    energies = numpy.diag(basis.energies)
    matrix = -1j * (numpy.kron(energies, identity) - numpy.kron(identity, energies.T))

    channels = [Channel.cav] + [Channel(factor.value) for factor in model.layout.atoms]
    baths = [(channel, bath_for_channel(config, channel)) for channel in channels]
    largest = max(bath.base_rate for _, bath in baths)
    window = None
    if config.window_factor is not None:
        window = config.window_factor * largest

    transitions = {}  # type: dict
    contributing = []  # type: List[Tuple[Text, BathSpec]]
    for channel, bath in baths:
        transitions[channel] = jump_operators(basis, model, channel)
        if bath.base_rate > 0:
            matrix = matrix + build_dissipator(
                transitions[channel], bath, window=window, secular=config.secular
            )
            contributing.append((channel.value, bath))
    P_inc = config.rate("P_inc")
    if P_inc > 0:
        matrix = matrix + build_pump(
            transitions[Channel.cav], P_inc, secular=config.secular
        )
        contributing.append(("pump", BathSpec(BathKind.flat, P_inc)))
    liouvillian = Liouvillian(
        matrix, size, contributing, model.gauge, basis.digest, transitions
    )
    log.debug(
        "assembled %dx%d Liouvillian, window=%s, trace deviation %.2e",
        size * size,
        size * size,
        window,
        liouvillian.trace_deviation(),
    )
    return liouvillian


def steady_state(L):
    # type: (Liouvillian) -> numpy.ndarray
    """Get the unique steady state of a Liouvillian.

    One equation of ``L rho = 0`` is replaced by ``Tr rho = 1`` and the
    system is solved directly.

    Raises:
        ~uscqed.errors.SteadyStateError: if the null space of ``L`` is
            not one dimensional.

    """
    size = L.size
    with convert_linalg_errors("steady_state"):
        singular = scipy.linalg.svdvals(L.matrix)
    threshold = NULL_SPACE_TOLERANCE * max(singular[0], 1e-300)
    dimension = int(numpy.sum(singular <= threshold))
    log.debug("Liouvillian null space dimension %d", dimension)
    if dimension != 1:
        raise errors.SteadyStateError(dimension)
    system = numpy.array(L.matrix)
    system[0, :] = _vec_identity(size)
    rhs = numpy.zeros(size * size, dtype=complex)
    rhs[0] = 1.0
    with convert_linalg_errors("steady_state"):
        solution = scipy.linalg.solve(system, rhs)
    rho = L.unvec(solution)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / numpy.trace(rho).real
    lowest = float(numpy.linalg.eigvalsh(rho)[0])
    if lowest < -POSITIVITY_TOLERANCE:
        log.warning("steady state has a negative eigenvalue %.3e", lowest)
    log.debug("steady-state residual %.3e", numpy.linalg.norm(L.apply(rho)))
    return rho


def evolve(L, rho0, t, method="expm"):
    # type: (Liouvillian, numpy.ndarray, float, Text) -> numpy.ndarray
    """Get ``exp(L t) rho0``.

    Arguments:
        L (Liouvillian): the generator.
        rho0 (numpy.ndarray): the initial ``M x M`` matrix.
        t (float): the time, ``>= 0``.
        method (str): ``expm`` for the dense exponential, ``ode`` for
            adaptive integration with DOP853.

    Raises:
        ~uscqed.errors.IntegrationFailed: if the integrator fails.

    """
    if t < 0:
        raise ValueError("t must be >= 0, got {!r}".format(t))
    vector = L.vec(rho0)
    if t == 0:
        return L.unvec(vector.copy())
    if method == "expm":
        with convert_linalg_errors("evolve", errors.IntegrationFailed):
            return L.unvec(scipy.linalg.expm(L.matrix * t) @ vector)
    if method != "ode":
        raise ValueError("method must be 'expm' or 'ode', got {!r}".format(method))
    matrix = L.matrix
    result = scipy.integrate.solve_ivp(
        lambda _, y: matrix @ y,
        (0.0, t),
        vector,
        method="DOP853",
        rtol=1e-10,
        atol=1e-12,
    )
    if not result.success:
        raise errors.IntegrationFailed(operation="evolve", details=result.message)
    return L.unvec(result.y[:, -1])
