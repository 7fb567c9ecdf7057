"""Lower a :class:`Schedule` to piecewise-constant Hamiltonians and gate matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..model import BasisConfig, DeviceConfig, Space, build_hamiltonian, sector_sum
from ..states import StateVector, basis_state, local_gate_matrix
from .types import CustomGate, GateEvent, PhaseGate, PiPulse, Schedule, ScheduleError, Segment


@dataclass(frozen=True, eq=False)
class CompiledSegment:
    hamiltonian: np.ndarray  # rad/ns
    duration: float  # ns
    start: float  # ns
    segment: Segment


@dataclass(frozen=True, eq=False)
class CompiledGates:
    """Product of one run of consecutive gate events, applied at ``time``."""

    matrix: np.ndarray
    time: float
    events: tuple[GateEvent, ...]


Step = Union[CompiledSegment, CompiledGates]


@dataclass(frozen=True, eq=False)
class Program:
    space: Space
    initial: StateVector
    steps: tuple[Step, ...]
    sample_times: np.ndarray
    device: DeviceConfig

    @property
    def segments(self) -> list[CompiledSegment]:
        return [s for s in self.steps if isinstance(s, CompiledSegment)]

    @property
    def gate_sets(self) -> list[CompiledGates]:
        return [s for s in self.steps if isinstance(s, CompiledGates)]

    @property
    def total_duration(self) -> float:
        return float(sum(s.duration for s in self.segments))


def _sector_range(schedule: Schedule) -> range:
    k0 = len(schedule.excited) + schedule.photons
    flips = sum(isinstance(op, PiPulse) for op in schedule.ops)
    return range(max(0, k0 - flips), k0 + flips + 1)


def _pi_matrix(space: Space, q: int) -> np.ndarray:
    """Bit flip of qubit ``q``; columns whose image lies outside the space stay zero.

    Those columns belong to sectors the schedule can never populate at this
    point, so the map is unitary on every reachable state.
    """
    dim = space.dimension
    out = np.zeros((dim, dim), dtype=complex)
    for i, c in enumerate(space.basis):
        bits = list(c.qubit_bits)
        bits[q] ^= 1
        target = BasisConfig(tuple(bits), c.photons)
        if target in space:
            out[space.index_of(target), i] = 1.0
    return out


def _gate_matrix(space: Space, event: GateEvent) -> np.ndarray:
    if isinstance(event, PiPulse):
        return _pi_matrix(space, event.qubit)
    if isinstance(event, PhaseGate):
        bits = space.bits()[:, event.qubit]
        return np.diag(np.exp(1j * event.theta * bits))
    if isinstance(event, CustomGate):
        try:
            return local_gate_matrix(space, event.qubits, event.matrix())
        except ValueError as exc:
            raise ScheduleError(
                f"custom gate on qubits {event.qubits}: {exc}; "
                "only excitation-conserving gates (and pi pulses) are supported"
            ) from None
    raise ScheduleError(f"unknown gate event {event!r}")


def compile_schedule(schedule: Schedule, config: DeviceConfig) -> Program:
    """Build the Hamiltonian program for ``schedule`` on the first N + 1 device qubits.

    The state space is the direct sum of every sector a run can reach from
    the initial product state (each pi pulse shifts the excitation by one).
    The photon cutoff is ``config.n_max`` or, if unset, the highest
    reachable excitation plus one.
    """
    n_total = schedule.n_total
    if n_total > config.n_qubits:
        raise ScheduleError(
            f"schedule uses {n_total} qubits (Q0..Q{schedule.n_qubits}), "
            f"device has {config.n_qubits}"
        )
    for op in schedule.ops:
        for q in getattr(op, "qubits", (getattr(op, "qubit", 0),)):
            if not 0 <= q < n_total:
                raise ScheduleError(f"gate on qubit {q} outside Q0..Q{schedule.n_qubits}")
    device = config.subset(n_total)
    ks = _sector_range(schedule)
    n_max = device.n_max if device.n_max is not None else ks[-1] + 1
    if schedule.photons > n_max:
        raise ScheduleError(
            f"initial photon number {schedule.photons} exceeds cutoff n_max={n_max}"
        )
    space = sector_sum(n_total, [k for k in ks if k <= n_total + n_max], n_max)
    bits = [0] * n_total
    for q in schedule.excited:
        bits[q] = 1
    initial = basis_state(space, BasisConfig(tuple(bits), schedule.photons))

    steps: list[Step] = []
    cache: dict = {}
    t = 0.0
    pending: list[GateEvent] = []

    def flush():
        if pending:
            m = np.eye(space.dimension, dtype=complex)
            for ev in pending:
                m = _gate_matrix(space, ev) @ m
            steps.append(CompiledGates(m, t, tuple(pending)))
            pending.clear()

    for op in schedule.ops:
        if isinstance(op, Segment):
            flush()
            if op.settings not in cache:
                cache[op.settings] = build_hamiltonian(device, op.settings, space)
            steps.append(CompiledSegment(cache[op.settings], op.duration, t, op))
            t += op.duration
        else:
            pending.append(op)
    flush()
    return Program(space, initial, tuple(steps), schedule.sample_times(), device)

