"""Numerical constants and defaults shared across the package.
"""

from __future__ import unicode_literals

#: Default number of bare photon states.
DEFAULT_N_FOCK = 200

#: Default number of dressed states kept after diagonalisation.
DEFAULT_M_DRESSED = 12

#: Transitions with ``omega <= OMEGA_MIN_CUTOFF`` (units of omega_c) are
#: degenerate pairs and are excluded from dissipators.
OMEGA_MIN_CUTOFF = 1e-9

#: Relative size below which a dressed matrix element is treated as zero.
ELEMENT_CUTOFF = 1e-12

#: Energies closer than this (relative to the spectral scale) are degenerate.
DEGENERACY_TOLERANCE = 1e-9

#: Multiplier of the largest base rate bounding the non-secular window.
DEFAULT_WINDOW_FACTOR = 10.0

#: Default emission-frequency grid, units of omega_c.
DEFAULT_OMEGA_MIN = 0.05
DEFAULT_OMEGA_MAX = 2.2
DEFAULT_OMEGA_POINTS = 400

#: Hermiticity tolerance, relative to the operator norm.
HERMITIAN_TOLERANCE = 1e-12

#: Null-space threshold for the steady state, relative to the largest
#: singular value of the Liouvillian.
NULL_SPACE_TOLERANCE = 1e-9

#: Steady-state eigenvalues below ``-POSITIVITY_TOLERANCE`` are reported.
POSITIVITY_TOLERANCE = 1e-8

#: Spectral samples in ``[-CLIP_TOLERANCE * max, 0)`` are clipped to zero.
CLIP_TOLERANCE = 1e-10

#: Sensor coupling above this fraction of g_a triggers a warning.
SENSOR_COUPLING_WARNING = 0.01

#: Factor by which the sensor coupling must undercut sqrt(gamma_s R / 2).
NONINVASIVE_MARGIN = 0.1

#: Coupling ``eta_a`` at which single-atom states are named by energy
#: order, close enough to zero that no level has crossed yet.
WEAK_LABEL_ETA = 1e-3

#: Coupling ``eta_a`` at which two-atom states are named by energy order.
TWO_ATOM_LABEL_ETA = 0.5

#: Labels of the key cavity transitions, keyed by the state labels
#: ``(j, k)`` with the emission going from ``|k>`` to ``|j>``.
TRANSITION_LABELS = {
    (0, 1): "A",
    (1, 3): "B",
    (0, 2): "C",
    (3, 4): "D",
    (2, 5): "E",
    (0, 4): "F",
    (0, 6): "G",
}

#: Environment variable overriding the sweep worker count.
WORKERS_ENV = "USCQED_WORKERS"

#: Environment variable setting the CLI log level.
LOG_LEVEL_ENV = "USCQED_LOG_LEVEL"

#: Number format used for every floating point CSV cell.
FLOAT_FORMAT = "{:.17e}"
