"""Schedules for the preparation, switching and absorption experiments.

All builders follow the same skeleton: pi pulse on the ancilla Q0, an iSWAP
that moves the excitation into the resonator, a collective resonant segment
that hands the photon to the register, then a set of phase gates that picks
the bright (all zero) or spin-wave (theta_j = -m phi_j) state, and finally a
resonant probe that is sampled on a uniform grid.
"""

from __future__ import annotations

import math

import numpy as np

from ..config import paper_default
from ..model import DeviceConfig, mhz_to_angular
from ..states import spin_wave_phases, sqrt_iswap
from .types import CustomGate, PhaseGate, PiPulse, SampleRange, Schedule, ScheduleError, Segment, settings_for

PROBE_NS = 100.0
STEP_NS = 0.5


def iswap_time(device: DeviceConfig) -> float:
    """Quarter vacuum-Rabi period pi / (2 g) in ns, using the mean coupling."""
    return math.pi / (2.0 * float(mhz_to_angular(device.g_mean_mhz)))


def collective_time(n: int, device: DeviceConfig) -> float:
    """Time for the register to absorb one photon: pi / (2 sqrt(N) g)."""
    return iswap_time(device) / math.sqrt(n)


def _check_n(n: int, device: DeviceConfig, lo: int = 1):
    if isinstance(n, bool) or int(n) != n or n < lo:
        raise ScheduleError(f"N must be an integer >= {lo}, got {n!r}")
    if n > device.n_qubits - 1:
        raise ScheduleError(
            f"N={n} needs {n + 1} qubits (register + ancilla Q0), "
            f"device has {device.n_qubits}"
        )


def _check_m(n: int, m: int):
    if isinstance(m, bool) or int(m) != m or not 1 <= m <= n - 1:
        raise ScheduleError(f"spin-wave index m={m!r} outside 1..{n - 1}")


def _preparation(n: int, thetas, device: DeviceConfig) -> list:
    reg = range(1, n + 1)
    return [
        PiPulse(0),
        Segment(iswap_time(device), settings_for(n, resonant=[0])),
        Segment(collective_time(n, device), settings_for(n, resonant=reg)),
        *(PhaseGate(j, float(t)) for j, t in zip(reg, thetas)),
    ]


def _probe(n: int, duration: float) -> Segment:
    return Segment(float(duration), settings_for(n, resonant=range(1, n + 1)))


def _sampling(start: float, duration: float, step: float):
    return (SampleRange(start, start + duration, step),)


def preparation_time(n: int, device: DeviceConfig | None = None) -> float:
    device = device or paper_default()
    return iswap_time(device) + collective_time(n, device)


def superradiance_protocol(
    n: int,
    device: DeviceConfig | None = None,
    probe_ns: float = PROBE_NS,
    step_ns: float = STEP_NS,
) -> Schedule:
    """Prepare the bright state of Q1..QN and probe it on resonance."""
    device = device or paper_default()
    _check_n(n, device)
    ops = _preparation(n, np.zeros(n), device) + [_probe(n, probe_ns)]
    return Schedule(n, tuple(ops), _sampling(preparation_time(n, device), probe_ns, step_ns))


def subradiance_protocol(
    n: int,
    m: int = 1,
    device: DeviceConfig | None = None,
    probe_ns: float = PROBE_NS,
    step_ns: float = STEP_NS,
) -> Schedule:
    """Same as :func:`superradiance_protocol` with phases -m phi_j, giving |D_N^m>."""
    device = device or paper_default()
    _check_n(n, device, lo=2)
    _check_m(n, m)
    ops = _preparation(n, -spin_wave_phases(n, m), device) + [_probe(n, probe_ns)]
    return Schedule(n, tuple(ops), _sampling(preparation_time(n, device), probe_ns, step_ns))


def switch_protocol(
    n: int,
    t_store: float = 100.0,
    m: int = 1,
    device: DeviceConfig | None = None,
    probe_ns: float = PROBE_NS,
    step_ns: float = STEP_NS,
) -> Schedule:
    """Store in |D_N^m> on resonance for ``t_store`` ns, then switch to |B_N>.

    The switch is the phase-gate set theta_j = +m phi_j, after which the
    resonant probe resumes.  Sampling covers storage and probe windows.
    """
    device = device or paper_default()
    _check_n(n, device, lo=2)
    _check_m(n, m)
    if not (math.isfinite(t_store) and t_store >= 0):
        raise ScheduleError(f"storage time must be >= 0, got {t_store!r}")
    reg = range(1, n + 1)
    ops = _preparation(n, -spin_wave_phases(n, m), device)
    ops += [
        _probe(n, t_store),
        *(PhaseGate(j, float(t)) for j, t in zip(reg, spin_wave_phases(n, m))),
        _probe(n, probe_ns),
    ]
    return Schedule(
        n, tuple(ops), _sampling(preparation_time(n, device), t_store + probe_ns, step_ns)
    )


def switch_time(n: int, t_store: float, device: DeviceConfig | None = None) -> float:
    """Absolute time of the switching phase gates in :func:`switch_protocol`."""
    return preparation_time(n, device) + t_store


def absorb_protocol(
    n: int,
    m: int = 1,
    device: DeviceConfig | None = None,
    probe_ns: float = PROBE_NS,
    step_ns: float = STEP_NS,
) -> Schedule:
    """Prepare |D_N^m>, load a second photon through Q0, then probe.

    While Q0 swaps the new photon into the resonator the register sits at
    its idle frequencies; the phases it picks up there, Delta_j t_iSWAP, are
    undone by a compensating phase-gate set.
    """
    device = device or paper_default()
    _check_n(n, device, lo=3)
    _check_m(n, m)
    reg = range(1, n + 1)
    t_sw = iswap_time(device)
    idle = mhz_to_angular(device.idle_detuning_mhz[1:n + 1])
    ops = _preparation(n, -spin_wave_phases(n, m), device)
    ops += [
        PiPulse(0),
        Segment(t_sw, settings_for(n, resonant=[0])),
        *(PhaseGate(j, float(d * t_sw)) for j, d in zip(reg, idle)),
        _probe(n, probe_ns),
    ]
    start = preparation_time(n, device) + t_sw
    return Schedule(n, tuple(ops), _sampling(start, probe_ns, step_ns))


def singlet_protocol(
    resonator_photon: int = 0,
    device: DeviceConfig | None = None,
    probe_ns: float = PROBE_NS,
    step_ns: float = STEP_NS,
) -> Schedule:
    """Four-qubit singlet from two parallel sqrt(iSWAP) gates, then a resonant probe.

    Q1 and Q2 start excited; sqrt(iSWAP) on (Q1, Q3) and (Q2, Q4) followed by
    pi/2 phase gates on Q3 and Q4 yields singlets on both pairs.  The
    resonator starts with ``resonator_photon`` (0 or 1) photons.
    """
    device = device or paper_default()
    _check_n(4, device)
    if resonator_photon not in (0, 1):
        raise ScheduleError(f"resonator photon must be 0 or 1, got {resonator_photon!r}")
    u = sqrt_iswap()
    ops = [
        CustomGate.from_matrix((1, 3), u),
        CustomGate.from_matrix((2, 4), u),
        PhaseGate(3, math.pi / 2),
        PhaseGate(4, math.pi / 2),
        _probe(4, probe_ns),
    ]
    return Schedule(
        4, tuple(ops), _sampling(0.0, probe_ns, step_ns), excited=(1, 2), photons=resonator_photon
    )
