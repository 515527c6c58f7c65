"""Dressed eigenbasis of a model and the operators expressed in it.

The master equation and the spectra work in the basis of the ``M``
lowest eigenstates of the system Hamiltonian. This module finds that
basis with a reproducible labelling of the states and projects the
dissipation-channel operators onto it.

"""

from __future__ import absolute_import, division, unicode_literals

import typing

import logging
import math
from collections import namedtuple

import numpy
import scipy.linalg

from . import errors
from ._repr import make_repr
from .constants import (
    DEGENERACY_TOLERANCE,
    ELEMENT_CUTOFF,
    OMEGA_MIN_CUTOFF,
    TWO_ATOM_LABEL_ETA,
    WEAK_LABEL_ETA,
)
from .enums import BathKind, Channel, Factor
from .error_tools import convert_linalg_errors
from .hamiltonian import build_model
from .hilbert import bare_excitations

if typing.TYPE_CHECKING:
    from typing import Dict, Iterable, List, Optional, Sequence, Text

    from .enums import Gauge
    from .hamiltonian import GaugeModel, ModelConfig
    from .hilbert import Operator, SpaceLayout


__all__ = [
    "DressedBasis",
    "ParityTable",
    "QuadratureRate",
    "StateLabels",
    "TransitionSet",
    "continue_labels",
    "diagonalize",
    "jump_operators",
    "parity_table",
    "quadrature_rates",
    "state_labels",
    "sum_rule_deficit",
]

log = logging.getLogger("uscqed.dressed")


#: One row of a quadrature table: ``p2`` is ``|<j|Pi|k>|^2 / 2`` and
#: ``rate`` the cavity photodetection rate of the transition ``k -> j``.
QuadratureRate = namedtuple("QuadratureRate", ["j", "k", "omega", "p2", "rate"])


class DressedBasis(object):
    """The ``M`` lowest eigenstates of a system Hamiltonian.

    Attributes:
        energies (numpy.ndarray): ascending energies, ground state at 0.
        states (numpy.ndarray): ``total_dim x M`` matrix, one
            eigenvector per column in the bare basis.
        ground_energy (float): the unshifted ground-state energy.
        layout (SpaceLayout): the bare Hilbert space.
        gauge (Gauge): the gauge of the diagonalised Hamiltonian.
        digest (str): digest of the config the model was built from.

    """

    def __init__(self, energies, states, ground_energy, layout, gauge, digest):
        # type: (numpy.ndarray, numpy.ndarray, float, SpaceLayout, Gauge, Text) -> None
        energies.flags.writeable = False
        states.flags.writeable = False
        self.energies = energies
        self.states = states
        self.ground_energy = ground_energy
        self.layout = layout
        self.gauge = gauge
        self.digest = digest

    def __repr__(self):
        return make_repr("DressedBasis", self.energies, str(self.gauge))

    def __len__(self):
        return len(self.energies)

    @property
    def size(self):
        # type: () -> int
        """`int`: the number of dressed states ``M``."""
        return len(self.energies)

    def check_model(self, model):
        # type: (GaugeModel) -> None
        """Check the basis was computed from ``model``.

        Raises:
            ~uscqed.errors.GaugeMismatch: if the gauge, the space or the
                config differ.

        """
        if model.gauge is not self.gauge:
            raise errors.GaugeMismatch.single(
                "model.gauge",
                "basis is in the {} gauge, model in the {} gauge".format(
                    self.gauge, model.gauge
                ),
            )
        if model.layout != self.layout or model.config.digest() != self.digest:
            raise errors.GaugeMismatch.single(
                "model", "basis was computed from a different configuration"
            )

    def project(self, operator):
        # type: (Operator) -> numpy.ndarray
        """Get the ``M x M`` matrix ``<i|O|j>`` of a bare-space operator."""
        if operator.layout != self.layout:
            raise errors.LayoutError.single(
                "operator", "operator does not act on the basis layout"
            )
        return self.states.conj().T @ operator.data @ self.states


def _degenerate_blocks(energies, tolerance):
    # type: (numpy.ndarray, float) -> List[slice]
    blocks = []
    start = 0
    for index in range(1, len(energies) + 1):
        if index == len(energies) or energies[index] - energies[index - 1] > tolerance:
            blocks.append(slice(start, index))
            start = index
    return blocks


def _canonical_span(vectors):
    # type: (numpy.ndarray) -> numpy.ndarray
    """Pick a basis of a subspace determined by the subspace alone.

    Bare basis vectors are projected onto the subspace in order of
    decreasing overlap and orthonormalised until the span is covered.

    """
    dim, count = vectors.shape
    weights = numpy.sum(numpy.abs(vectors) ** 2, axis=1)
    order = sorted(range(dim), key=lambda i: (-round(weights[i], 12), i))
    basis = []  # type: List[numpy.ndarray]
    for index in order:
        if len(basis) == count:
            break
        candidate = vectors @ vectors[index].conj()
        for existing in basis:
            candidate = candidate - existing * (existing.conj() @ candidate)
        norm = numpy.linalg.norm(candidate)
        if norm > 1e-6:
            basis.append(candidate / norm)
    return numpy.column_stack(basis)


def _fix_phases(states):
    # type: (numpy.ndarray) -> numpy.ndarray
    for column in range(states.shape[1]):
        vector = states[:, column]
        pivot = numpy.argmax(numpy.abs(vector))
        phase = vector[pivot] / abs(vector[pivot])
        states[:, column] = vector / phase
    return states


def diagonalize(model, M=None):
    # type: (GaugeModel, Optional[int]) -> DressedBasis
    """Get the ``M`` lowest eigenstates of a model.

    Degenerate eigenvectors are rotated into parity eigenstates ordered
    by descending parity, remaining ties are resolved by
    `_canonical_span`, and every state is given a real positive largest
    component, so repeated calls return identical vectors.

    Arguments:
        model (GaugeModel): the model to diagonalise.
        M (int, optional): number of states, defaults to
            ``model.config.M_dressed``.

    Raises:
        ~uscqed.errors.ConfigError: if ``M`` exceeds the dimension.
        ~uscqed.errors.EigensolverFailed: if the eigensolver fails.

    """
    total = model.layout.total_dim
    M = model.config.M_dressed if M is None else M
    if not 1 <= M <= total:
        raise errors.ConfigError.single(
            "model.M_dressed", "must be between 1 and {}, got {}".format(total, M)
        )
    count = min(M + 1, total)
    with convert_linalg_errors("diagonalize", errors.EigensolverFailed):
        energies, states = scipy.linalg.eigh(
            model.H.data, subset_by_index=[0, count - 1]
        )
    scale = max(1.0, float(numpy.abs(energies).max()))
    tolerance = DEGENERACY_TOLERANCE * scale
    if count > M and energies[M] - energies[M - 1] <= tolerance:
        log.warning(
            "truncation at M=%d splits a degenerate level at E=%.6f", M, energies[M - 1]
        )
    parity = (-1.0) ** bare_excitations(model.layout)
    states = numpy.array(states, dtype=complex)
    for block in _degenerate_blocks(energies, tolerance):
        if block.stop - block.start < 2:
            continue
        vectors = states[:, block]
        restricted = vectors.conj().T @ (parity[:, None] * vectors)
        values, rotation = numpy.linalg.eigh(0.5 * (restricted + restricted.conj().T))
        vectors = vectors @ rotation[:, ::-1]
        values = values[::-1]
        columns = []
        for sub in _degenerate_blocks(-values, 1e-6):
            columns.append(_canonical_span(vectors[:, sub]))
        states[:, block] = numpy.hstack(columns)
        energies[block] = energies[block].mean()
    states = _fix_phases(states[:, :M])
    energies = numpy.array(energies[:M])
    ground = float(energies[0])
    log.debug("diagonalised %d states, ground energy %.12f", M, ground)
    return DressedBasis(
        energies - ground,
        states,
        ground,
        model.layout,
        model.gauge,
        model.config.digest(),
    )


class TransitionSet(object):
    """Downward transitions of one dissipation channel.

    Transition ``i`` lowers ``|k>`` to ``|j>`` with ``j < k`` and
    frequency ``omega = E_k - E_j``; ``elements[i]`` is ``<j|O|k>``.

    Attributes:
        channel (Channel): the dissipation channel.
        pairs (numpy.ndarray): ``n x 2`` integer array of ``(j, k)``.
        omegas (numpy.ndarray): the transition frequencies.
        elements (numpy.ndarray): the complex matrix elements.
        size (int): the dressed-basis dimension ``M``.

    """

    def __init__(self, channel, pairs, omegas, elements, size):
        # type: (Channel, numpy.ndarray, numpy.ndarray, numpy.ndarray, int) -> None
        self.channel = channel
        self.pairs = numpy.asarray(pairs, dtype=int).reshape(-1, 2)
        self.omegas = numpy.asarray(omegas, dtype=float)
        self.elements = numpy.asarray(elements, dtype=complex)
        self.size = size

    def __repr__(self):
        return make_repr("TransitionSet", str(self.channel), len(self))

    def __len__(self):
        return len(self.omegas)

    def __iter__(self):
        return iter(
            zip(
                (tuple(pair) for pair in self.pairs.tolist()),
                self.omegas.tolist(),
                self.elements.tolist(),
            )
        )

    def x_plus(self, index):
        # type: (int) -> numpy.ndarray
        """Get the lowering operator ``<j|O|k> |j><k|`` of one transition."""
        j, k = self.pairs[index]
        matrix = numpy.zeros((self.size, self.size), dtype=complex)
        matrix[j, k] = self.elements[index]
        return matrix

    def x_minus(self, index):
        # type: (int) -> numpy.ndarray
        """Get the raising operator, the adjoint of `x_plus`."""
        return self.x_plus(index).conj().T

    def total_x_plus(self):
        # type: () -> numpy.ndarray
        """Get the sum of every lowering operator."""
        matrix = numpy.zeros((self.size, self.size), dtype=complex)
        for (j, k), element in zip(self.pairs, self.elements):
            matrix[j, k] += element
        return matrix

    def total_x_minus(self):
        # type: () -> numpy.ndarray
        """Get the sum of every raising operator."""
        return self.total_x_plus().conj().T


def jump_operators(basis, model, channel):
    # type: (DressedBasis, GaugeModel, Channel) -> TransitionSet
    """Get the dressed transitions of a dissipation channel.

    The cavity channel uses the model's field operator ``Pi``, atomic
    channels the ``sigma_x`` of their atom. Pairs closer than the
    degeneracy cutoff and elements below the element cutoff are
    dropped.

    Raises:
        ~uscqed.errors.GaugeMismatch: if ``basis`` was not computed
            from ``model``.
        ~uscqed.errors.LayoutError: if the channel's atom is absent.

    """
    channel = Channel(channel)
    basis.check_model(model)
    matrix = basis.project(model.channel_operator(channel))
    cutoff = ELEMENT_CUTOFF * max(1.0, float(numpy.abs(matrix).max()))
    omega_cutoff = OMEGA_MIN_CUTOFF * model.config.omega_c
    pairs = []
    omegas = []
    elements = []
    size = basis.size
    for j in range(size):
        for k in range(j + 1, size):
            omega = basis.energies[k] - basis.energies[j]
            if omega <= omega_cutoff or abs(matrix[j, k]) <= cutoff:
                continue
            pairs.append((j, k))
            omegas.append(omega)
            elements.append(matrix[j, k])
    log.debug("%s channel: %d transitions", channel, len(pairs))
    return TransitionSet(channel, pairs, omegas, elements, size)


class ParityTable(object):
    """Parity expectation values of the dressed states.

    Attributes:
        values (numpy.ndarray): ``<j|P|j>`` for each state.
        mixed (numpy.ndarray): `True` where ``|<j|P|j>| <= 0.99``.

    """

    THRESHOLD = 0.99

    def __init__(self, values):
        # type: (numpy.ndarray) -> None
        self.values = numpy.asarray(values, dtype=float)
        self.mixed = numpy.abs(self.values) <= self.THRESHOLD

    def __repr__(self):
        return make_repr("ParityTable", self.labels)

    def __len__(self):
        return len(self.values)

    @property
    def labels(self):
        # type: () -> List[Text]
        """`list`: ``even``, ``odd`` or ``mixed`` per state."""
        return [
            "mixed" if mixed else ("even" if value > 0 else "odd")
            for value, mixed in zip(self.values, self.mixed)
        ]

    @property
    def signs(self):
        # type: () -> numpy.ndarray
        """`numpy.ndarray`: ``+1`` or ``-1`` per state, by sign."""
        return numpy.where(self.values >= 0, 1, -1)


def parity_table(basis, layout=None):
    # type: (DressedBasis, Optional[SpaceLayout]) -> ParityTable
    """Get ``<j| exp(i pi N) |j>`` for every dressed state.

    ``N`` counts the photons plus the excited atoms in the bare basis;
    it is the symmetry of every parity-conserving build in both gauges.

    """
    layout = basis.layout if layout is None else layout
    if layout != basis.layout:
        raise errors.LayoutError.single(
            "layout", "basis was computed on {!r}".format(basis.layout)
        )
    parity = (-1.0) ** bare_excitations(layout)
    values = numpy.real(
        numpy.einsum("ij,i,ij->j", basis.states.conj(), parity, basis.states)
    )
    table = ParityTable(values)
    if table.mixed.any():
        log.debug(
            "states %s have mixed parity", numpy.flatnonzero(table.mixed).tolist()
        )
    return table


class StateLabels(object):
    """Names of the energy-ordered dressed states.

    A dressed state is named by its position in the energy order at a
    reference coupling. Levels of equal parity never cross, so the
    ``r``-th state of a parity sector keeps the name of the ``r``-th
    state of that sector at the reference, while levels of opposite
    parity may swap names as they cross.

    Attributes:
        labels (numpy.ndarray): the label of each state, in energy
            order.
        reference_eta (float): ``eta_a`` of the reference, or `None`
            when the states are named by their own energy order.

    """

    def __init__(self, labels, reference_eta=None):
        # type: (Sequence[int], Optional[float]) -> None
        self.labels = numpy.asarray(labels, dtype=int)
        self.labels.flags.writeable = False
        self.reference_eta = reference_eta

    def __repr__(self):
        return make_repr("StateLabels", self.labels.tolist())

    def __len__(self):
        return len(self.labels)

    @classmethod
    def energy_order(cls, size):
        # type: (int) -> StateLabels
        """Get the labels naming ``size`` states by their energy order."""
        return cls(numpy.arange(size))

    def index(self, label):
        # type: (int) -> int
        """Get the energy index of the state named ``label``.

        Raises:
            KeyError: if no state has that label.

        """
        found = numpy.flatnonzero(self.labels == label)
        if not len(found):
            raise KeyError(label)
        return int(found[0])

    def energy(self, basis, label):
        # type: (DressedBasis, int) -> float
        """Get the ground-aligned energy of the state named ``label``."""
        return float(basis.energies[self.index(label)])

    def relabel(self, rows):
        # type: (Iterable[QuadratureRate]) -> List[QuadratureRate]
        """Get quadrature rows with ``j`` and ``k`` replaced by labels.

        Each pair is ordered so that ``j < k``.
        """
        relabelled = []
        for row in rows:
            j, k = sorted((int(self.labels[row.j]), int(self.labels[row.k])))
            relabelled.append(row._replace(j=j, k=k))
        return relabelled


def continue_labels(basis, reference, reference_eta=None):
    # type: (DressedBasis, DressedBasis, Optional[float]) -> StateLabels
    """Carry the energy-order names of ``reference`` over to ``basis``.

    States are matched rank by rank within each parity sector. States
    of ``basis`` beyond the sector sizes of ``reference`` get labels
    from ``reference.size`` upward. Mixed-parity states leave nothing
    to follow, and the states are then named by energy order.

    Raises:
        ~uscqed.errors.LayoutError: if the bases act on different
            spaces.

    """
    if basis.layout != reference.layout:
        raise errors.LayoutError.single(
            "reference", "bases act on different spaces"
        )
    current = parity_table(basis)
    previous = parity_table(reference)
    if current.mixed.any() or previous.mixed.any():
        log.warning("mixed-parity states, naming states by energy order")
        return StateLabels.energy_order(basis.size)
    sectors = {1: [], -1: []}  # type: Dict[int, List[int]]
    for index, sign in enumerate(previous.signs.tolist()):
        sectors[sign].append(index)
    ranks = {1: 0, -1: 0}
    spare = reference.size
    labels = []
    for sign in current.signs.tolist():
        sector, rank = sectors[sign], ranks[sign]
        ranks[sign] += 1
        if rank < len(sector):
            labels.append(sector[rank])
        else:
            labels.append(spare)
            spare += 1
    return StateLabels(labels, reference_eta)


def _reference_config(config, reference_eta):
    # type: (ModelConfig, float) -> ModelConfig
    scale = reference_eta / config.eta_a
    changes = dict(
        g_a=config.g_a * scale,
        g_b=config.g_b * scale,
        M_dressed=min(config.total_dim, 2 * config.M_dressed + 2),
    )
    if not config.relative_to_g:
        changes["g_s"] = config.g_s * scale
    return config.replace(**changes)


def state_labels(model, basis, reference_eta=None):
    # type: (GaugeModel, DressedBasis, Optional[float]) -> StateLabels
    """Name the dressed states of ``model`` by a reference coupling.

    Every coupling is scaled so that ``eta_a`` equals
    ``reference_eta``, the scaled model is diagonalised and its energy
    order is carried over with `continue_labels`. Single-atom and
    sensing-atom models default to the weak-coupling limit, so each
    state keeps the name of the bare level it grows out of; two-atom
    models default to ``eta_a = 0.5``.

    Raises:
        ~uscqed.errors.GaugeMismatch: if ``basis`` was not computed
            from ``model``.

    """
    basis.check_model(model)
    config = model.config
    if reference_eta is None:
        if Factor.atom_b in config.model.atoms:
            reference_eta = TWO_ATOM_LABEL_ETA
        else:
            reference_eta = WEAK_LABEL_ETA
    if config.eta_a <= 0 or reference_eta <= 0:
        return StateLabels.energy_order(basis.size)
    if abs(reference_eta - config.eta_a) <= 1e-12 * config.eta_a:
        return StateLabels.energy_order(basis.size)
    reference_model = build_model(_reference_config(config, reference_eta))
    reference = diagonalize(reference_model)
    labels = continue_labels(basis, reference, reference_eta)
    log.debug("state labels at eta_a=%g: %s", reference_eta, labels.labels.tolist())
    return labels


def quadrature_rates(basis, model, kind=None):
    # type: (DressedBasis, GaugeModel, Optional[BathKind]) -> List[QuadratureRate]
    """Get the squared quadrature elements and photodetection rates.

    For every pair ``j < k`` with ``omega_jk`` above the degeneracy
    cutoff, ``p2 = |<j|Pi|k>|^2 / 2`` and ``rate = kappa(omega_jk) p2``,
    where ``kappa(omega)`` is the cavity bath rate, scaled by
    ``omega / omega_c`` for an Ohmic bath.

    Arguments:
        basis (DressedBasis): the dressed basis of ``model``.
        model (GaugeModel): the model.
        kind (BathKind, optional): overrides ``model.config.bath_cav``.

    """
    basis.check_model(model)
    config = model.config
    kind = BathKind(kind) if kind is not None else config.bath_cav
    kappa = config.rate("kappa")
    matrix = basis.project(model.Pi)
    rows = []
    for j in range(basis.size):
        for k in range(j + 1, basis.size):
            omega = float(basis.energies[k] - basis.energies[j])
            if omega <= OMEGA_MIN_CUTOFF * config.omega_c:
                continue
            p2 = 0.5 * abs(matrix[j, k]) ** 2
            weight = omega / config.omega_c if kind is BathKind.ohmic else 1.0
            rows.append(QuadratureRate(j, k, omega, p2, kappa * weight * p2))
    return rows


def sum_rule_deficit(basis, model, states=None):
    # type: (DressedBasis, GaugeModel, Optional[Iterable[int]]) -> numpy.ndarray
    """Get the truncation deficit of the quadrature sum rule.

    For each dressed state ``j`` returns
    ``1 - sum_k |<j|Pi|k>|^2 / <j|Pi^2|j>`` with ``k`` over the
    ``M`` kept states; it vanishes for an untruncated basis.

    """
    basis.check_model(model)
    indices = list(range(basis.size)) if states is None else list(states)
    applied = model.Pi.data @ basis.states[:, indices]
    full = numpy.sum(numpy.abs(applied) ** 2, axis=0)
    kept = numpy.sum(numpy.abs(basis.states.conj().T @ applied) ** 2, axis=0)
    return 1.0 - kept / numpy.where(full > 0, full, math.inf)
