"""Enums used across the model, master-equation and sweep layers.
"""

from __future__ import absolute_import, unicode_literals

from enum import Enum, unique


class _ValueEnum(Enum):
    """Enum parsed from, and serialised to, its string value."""

    def __str__(self):
        return self.value

    @classmethod
    def choices(cls):
        """Return the accepted string values."""
        return [member.value for member in cls]


@unique
class Factor(_ValueEnum):
    """Labels of the tensor factors, in canonical layout order."""

    cavity = "cavity"
    atom_a = "atom_a"
    atom_b = "atom_b"
    sensor = "sensor"


@unique
class Gauge(_ValueEnum):
    """Electromagnetic gauge of a Hamiltonian."""

    dipole = "dipole"
    coulomb = "coulomb"


@unique
class Model(_ValueEnum):
    """System Hamiltonian families."""

    #: Quantum Rabi model.
    qrm = "qrm"
    #: Jaynes-Cummings model (rotating-wave QRM).
    jcm = "jcm"
    #: Coulomb-gauge QRM built by naive truncation.
    qrm_naive_coulomb = "qrm_naive_coulomb"
    #: QRM plus a weakly coupled sensing atom.
    saa = "saa"
    #: Rotating-wave version of `saa`.
    saa_rwa = "saa_rwa"
    #: Two dissimilar atoms in one cavity.
    gdm = "gdm"
    #: Rotating-wave version of `gdm`.
    gdm_rwa = "gdm_rwa"

    @property
    def rwa(self):
        # type: () -> bool
        """`bool`: whether the model drops counter-rotating terms."""
        return self in (Model.jcm, Model.saa_rwa, Model.gdm_rwa)

    @property
    def atoms(self):
        """`tuple`: the atomic factors the model needs."""
        if self in (Model.saa, Model.saa_rwa):
            return (Factor.atom_a, Factor.sensor)
        if self in (Model.gdm, Model.gdm_rwa):
            return (Factor.atom_a, Factor.atom_b)
        return (Factor.atom_a,)


@unique
class BathKind(_ValueEnum):
    """Spectral shape of a zero-temperature bath."""

    #: Frequency independent rate.
    flat = "flat"
    #: Rate proportional to the transition frequency.
    ohmic = "ohmic"


@unique
class Channel(_ValueEnum):
    """Dissipation channels, each with its own system operator."""

    cav = "cav"
    atom_a = "atom_a"
    atom_b = "atom_b"
    sensor = "sensor"

    @property
    def factor(self):
        # type: () -> Factor
        """`Factor`: the tensor factor the channel acts on."""
        return Factor.cavity if self is Channel.cav else Factor(self.value)


@unique
class Method(_ValueEnum):
    """How a spectrum was computed."""

    qrt = "qrt"
    saa = "saa"
    time_domain = "time_domain"


@unique
class SweepTarget(_ValueEnum):
    """Parameters a sweep can scan."""

    eta_joint = "eta_joint"
    eta_single = "eta_single"
    omega_b = "omega_b"
    g_b_magnitude = "g_b_magnitude"
    phi_b = "phi_b"
    omega_s = "omega_s"


@unique
class Output(_ValueEnum):
    """Tables a sweep job can produce."""

    eigenvalues = "eigenvalues"
    parity = "parity"
    p2_table = "p2_table"
    spectrum_qrt = "spectrum_qrt"
    spectrum_saa = "spectrum_saa"

    @property
    def is_spectrum(self):
        # type: () -> bool
        """`bool`: whether the output is a spectrum."""
        return self in (Output.spectrum_qrt, Output.spectrum_saa)
