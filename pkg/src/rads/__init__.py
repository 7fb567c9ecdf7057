"""Exact-dynamics simulation of qubits coupled to a shared resonator.

Collective bright (superradiant), spin-wave dark (subradiant) and singlet
states are prepared and probed through pulse schedules on a Tavis-Cummings
device model.
"""

from .analysis import NoOscillation, RabiFit, ScalingFit, fit_rabi, fit_scaling
from .config import RunConfig, paper_default
from .evolve import Trajectory, propagate_segment, run
from .model import (
    BasisConfig,
    DeviceConfig,
    QubitSetting,
    SectorSpace,
    SectorSum,
    build_hamiltonian,
    enumerate_sector,
    sector_sum,
)
from .states import (
    StateVector,
    apply_phase_gates,
    bright_state,
    dark_state,
    fidelity,
    singlet4,
)

__version__ = "0.1.0"

__all__ = [
    "BasisConfig",
    "DeviceConfig",
    "NoOscillation",
    "QubitSetting",
    "RabiFit",
    "RunConfig",
    "ScalingFit",
    "SectorSpace",
    "SectorSum",
    "StateVector",
    "Trajectory",
    "apply_phase_gates",
    "bright_state",
    "build_hamiltonian",
    "dark_state",
    "enumerate_sector",
    "fidelity",
    "fit_rabi",
    "fit_scaling",
    "paper_default",
    "propagate_segment",
    "run",
    "sector_sum",
    "singlet4",
]
