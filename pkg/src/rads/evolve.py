"""Time evolution through compiled schedules.

Two engines propagate exp(-i H t) for piecewise-constant H:

* ``"reference"`` diagonalises H once per segment (``numpy.linalg.eigh``);
* ``"integrator"`` takes fixed classical RK4 steps with h * ||H||_2 <= 0.01.

They share nothing but the Hamiltonian, so each serves as the other's check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import DeviceConfig
from .schedule.compile import CompiledGates, CompiledSegment, Program, compile_schedule
from .schedule.types import TIME_TOL, Schedule
from .states import StateVector

ENGINES = ("reference", "integrator")
RK4_STEP = 0.01  # max h * ||H||_2
HERMITIAN_TOL = 1e-10
NORM_DRIFT_TOL = 1e-9


def _check_hermitian(H: np.ndarray):
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"Hamiltonian must be square, got shape {H.shape}")
    err = np.max(np.abs(H - H.conj().T)) if H.size else 0.0
    if err > HERMITIAN_TOL:
        raise ValueError(f"Hamiltonian is not Hermitian (max |H - H^dag| = {err:.3g})")


class _Spectral:
    """exp(-i H t) from one eigendecomposition."""

    def __init__(self, H):
        self.w, self.V = np.linalg.eigh(H)

    def apply(self, psi: np.ndarray, t: float) -> np.ndarray:
        return self.V @ (np.exp(-1j * self.w * t) * (self.V.conj().T @ psi))


def rk4_propagate(H: np.ndarray, psi: np.ndarray, t: float) -> np.ndarray:
    """Integrate d psi/dt = -i H psi over ``t`` with fixed RK4 steps."""
    norm = np.linalg.norm(H, 2) if H.size else 0.0
    if t == 0 or norm == 0:
        return np.array(psi, dtype=complex)
    n_steps = max(1, math.ceil(t * norm / RK4_STEP))
    h = t / n_steps
    A = -1j * np.asarray(H, dtype=complex)
    y = np.array(psi, dtype=complex)
    for _ in range(n_steps):
        k1 = A @ y
        k2 = A @ (y + 0.5 * h * k1)
        k3 = A @ (y + 0.5 * h * k2)
        k4 = A @ (y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


def propagate_segment(
    state: StateVector, H: np.ndarray, t: float, engine: str = "reference"
) -> StateVector:
    """Return exp(-i H t) |state> with H in rad/ns and t in ns."""
    _check_hermitian(H)
    if H.shape[0] != state.space.dimension:
        raise ValueError(
            f"Hamiltonian of dimension {H.shape[0]} for a state of dimension "
            f"{state.space.dimension}"
        )
    if not (math.isfinite(t) and t >= 0):
        raise ValueError(f"propagation time must be finite and >= 0, got {t!r}")
    psi = _propagate(H, state.amplitudes, t, engine)
    return StateVector(state.space, psi / np.linalg.norm(psi) if engine == "integrator" else psi)


def _propagate(H, psi, t, engine):
    if engine == "reference":
        return _Spectral(H).apply(psi, t)
    if engine == "integrator":
        return rk4_propagate(H, psi, t)
    raise ValueError(f"unknown engine {engine!r} (choose from {', '.join(ENGINES)})")


@dataclass(eq=False)
class Trajectory:
    """Observables sampled along a run.

    ``p1`` has one column per qubit Q0..QN.  ``segment_index`` tells which
    compiled segment each sample lies in (-1 when gates followed the last
    segment), and ``energy`` is <H> of that segment.
    """

    times: np.ndarray
    p1: np.ndarray
    photon_dist: np.ndarray
    energy: np.ndarray
    segment_index: np.ndarray
    norm: np.ndarray
    engine: str = "reference"
    states: list[StateVector] | None = field(default=None, repr=False)

    @property
    def photon_p1(self) -> np.ndarray:
        return self.photon_dist[:, 1] if self.photon_dist.shape[1] > 1 else np.zeros(len(self.times))

    @property
    def photon_mean(self) -> np.ndarray:
        return self.photon_dist @ np.arange(self.photon_dist.shape[1])

    @property
    def excitation(self) -> np.ndarray:
        """sum_j P1_j + <n> at each sample; conserved between pi pulses."""
        return self.p1.sum(axis=1) + self.photon_mean

    @property
    def register_p1(self) -> np.ndarray:
        """P1 of Q1..QN (drops the ancilla column)."""
        return self.p1[:, 1:]

    def window(self, start: float, stop: float) -> "Trajectory":
        """Samples with ``start <= t <= stop`` (ns, 1e-9 tolerance)."""
        m = (self.times >= start - TIME_TOL) & (self.times <= stop + TIME_TOL)
        return Trajectory(
            self.times[m],
            self.p1[m],
            self.photon_dist[m],
            self.energy[m],
            self.segment_index[m],
            self.norm[m],
            self.engine,
            None if self.states is None else [s for s, k in zip(self.states, m) if k],
        )


def run(
    schedule: Schedule | Program,
    config: DeviceConfig | None = None,
    engine: str = "reference",
    store_states: bool = False,
) -> Trajectory:
    """Run a schedule (or an already compiled program) and sample observables."""
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r} (choose from {', '.join(ENGINES)})")
    if isinstance(schedule, Program):
        program = schedule
    else:
        if config is None:
            raise ValueError("a device config is needed to compile a schedule")
        program = compile_schedule(schedule, config)

    space = program.space
    bits = space.bits().astype(float)
    photons = space.photon_numbers()
    n_ph = space.n_max + 1
    times = np.asarray(program.sample_times, dtype=float)

    records: list[tuple] = []
    psi = program.initial.amplitudes.astype(complex)
    seg_no = -1
    current_H = None
    spectral: dict[int, _Spectral] = {}
    i = 0

    def record(vec, H, idx):
        probs = np.abs(vec) ** 2
        energy = float(np.real(np.vdot(vec, H @ vec))) if H is not None else math.nan
        records.append(
            (
                probs @ bits,
                np.bincount(photons, weights=probs, minlength=n_ph),
                energy,
                idx,
                float(np.sqrt(probs.sum())),
                StateVector(space, vec / np.linalg.norm(vec)) if store_states else None,
            )
        )

    for step in program.steps:
        if isinstance(step, CompiledGates):
            before = np.linalg.norm(psi)
            psi = step.matrix @ psi
            if abs(np.linalg.norm(psi) - before) > NORM_DRIFT_TOL:
                raise RuntimeError(
                    f"gates at t={step.time} ns moved population outside the compiled sectors"
                )
            current_H = None
            continue
        seg_no += 1
        H = step.hamiltonian
        current_H = H
        t0, t1 = step.start, step.start + step.duration
        if engine == "reference":
            key = id(H)
            if key not in spectral:
                spectral[key] = _Spectral(H)
            prop = spectral[key]
            while i < len(times) and times[i] < t1 - TIME_TOL:
                record(prop.apply(psi, max(times[i] - t0, 0.0)), H, seg_no)
                i += 1
            psi = prop.apply(psi, step.duration)
        else:
            cursor, vec = t0, psi
            while i < len(times) and times[i] < t1 - TIME_TOL:
                dt = max(times[i] - cursor, 0.0)
                vec = rk4_propagate(H, vec, dt)
                cursor += dt
                record(vec, H, seg_no)
                i += 1
            psi = rk4_propagate(H, vec, max(t1 - cursor, 0.0))
    while i < len(times):
        record(psi, current_H, seg_no if current_H is not None else -1)
        i += 1

    if not records:
        empty = np.zeros((0, space.n_qubits))
        return Trajectory(np.array([]), empty, np.zeros((0, n_ph)), np.array([]),
                          np.array([], dtype=int), np.array([]), engine,
                          [] if store_states else None)
    p1, dist, energy, idx, norm, states = zip(*records)
    return Trajectory(
        times=times,
        p1=np.array(p1),
        photon_dist=np.array(dist),
        energy=np.array(energy),
        segment_index=np.array(idx, dtype=int),
        norm=np.array(norm),
        engine=engine,
        states=list(states) if store_states else None,
    )
