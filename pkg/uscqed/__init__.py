"""Gauge-invariant open-system cavity QED in the ultrastrong regime.
"""

from ._version import __version__
from .config import RunConfig, load_run_config
from .dressed import (
    diagonalize,
    jump_operators,
    parity_table,
    quadrature_rates,
    state_labels,
)
from .enums import BathKind, Channel, Factor, Gauge, Model, Output
from .gme import assemble_liouvillian, steady_state
from .hamiltonian import ModelConfig, build_model
from .spectra import cavity_spectrum, spectrum_qrt, spectrum_saa
from .sweep import compare_goldens, run

__all__ = [
    "__version__",
    "BathKind",
    "Channel",
    "Factor",
    "Gauge",
    "Model",
    "ModelConfig",
    "Output",
    "RunConfig",
    "assemble_liouvillian",
    "build_model",
    "cavity_spectrum",
    "compare_goldens",
    "diagonalize",
    "jump_operators",
    "load_run_config",
    "parity_table",
    "quadrature_rates",
    "run",
    "spectrum_qrt",
    "spectrum_saa",
    "state_labels",
    "steady_state",
]
