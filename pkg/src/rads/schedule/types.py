"""Schedule value types.

A schedule acts on the register qubits Q1..QN plus the ancilla Q0 (index 0),
which loads photons into the resonator.  Segments therefore carry N + 1
qubit settings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..model import IDLE, QubitSetting

TIME_TOL = 1e-9  # ns


class ScheduleError(ValueError):
    """Invalid schedule content.  ``line``/``column`` are set when parsed from text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        loc = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(loc + message)


@dataclass(frozen=True)
class PiPulse:
    qubit: int


@dataclass(frozen=True)
class PhaseGate:
    qubit: int
    theta: float


@dataclass(frozen=True)
class CustomGate:
    """Ideal unitary on one or two qubits, stored row-major as nested tuples."""

    qubits: tuple[int, ...]
    unitary: tuple[tuple[complex, ...], ...]

    @classmethod
    def from_matrix(cls, qubits, matrix) -> "CustomGate":
        m = np.asarray(matrix, dtype=complex)
        return cls(tuple(int(q) for q in qubits), tuple(tuple(complex(x) for x in row) for row in m))

    def matrix(self) -> np.ndarray:
        return np.array(self.unitary, dtype=complex)


GateEvent = Union[PiPulse, PhaseGate, CustomGate]


@dataclass(frozen=True)
class Segment:
    """Piecewise-constant interval: per-qubit frequency settings held for ``duration`` ns."""

    duration: float
    settings: tuple[QubitSetting, ...]


@dataclass(frozen=True)
class SampleRange:
    """Times ``start + i * step`` up to ``stop`` (inclusive, within 1e-9 of a step)."""

    start: float
    stop: float
    step: float

    def times(self) -> np.ndarray:
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return self.start + self.step * np.arange(max(n, 0))


@dataclass(frozen=True)
class SamplePoints:
    times_ns: tuple[float, ...]

    def times(self) -> np.ndarray:
        return np.array(self.times_ns, dtype=float)


SampleSpec = Union[SampleRange, SamplePoints]


def settings_for(n_register: int, resonant=(), detuned=None) -> tuple[QubitSetting, ...]:
    """Settings for Q0..QN: listed qubits resonant/detuned, all others idle."""
    out = [IDLE] * (n_register + 1)
    for q in resonant:
        out[q] = QubitSetting.resonant()
    for q, d in (detuned or {}).items():
        out[q] = QubitSetting.detuned(d)
    return tuple(out)


@dataclass(frozen=True)
class Schedule:
    """Initial product state, an ordered list of gates and segments, and sampling.

    ``excited`` lists qubits in |1> at t = 0 and ``photons`` is the initial
    resonator Fock number.  Gates act instantaneously at the boundary where
    they appear.
    """

    n_qubits: int
    ops: tuple[Union[Segment, GateEvent], ...]
    samples: tuple[SampleSpec, ...] = ()
    excited: tuple[int, ...] = ()
    photons: int = 0

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        object.__setattr__(self, "samples", tuple(self.samples))
        object.__setattr__(self, "excited", tuple(self.excited))
        for problem in self.problems():
            raise ScheduleError(problem)

    @property
    def n_total(self) -> int:
        """Register qubits plus the ancilla."""
        return self.n_qubits + 1

    def _check_qubit(self, q, what):
        if isinstance(q, bool) or not isinstance(q, (int, np.integer)) or not 0 <= q <= self.n_qubits:
            return f"{what}: qubit index {q!r} outside 0..{self.n_qubits}"
        return None

    def problems(self) -> list[str]:
        out = []
        if isinstance(self.n_qubits, bool) or int(self.n_qubits) != self.n_qubits or self.n_qubits < 1:
            return [f"qubit count must be >= 1, got {self.n_qubits!r}"]
        if int(self.photons) != self.photons or self.photons < 0:
            out.append(f"initial photon number must be >= 0, got {self.photons!r}")
        if len(set(self.excited)) != len(self.excited):
            out.append("initially excited qubits listed twice")
        out += [p for q in self.excited if (p := self._check_qubit(q, "excite"))]
        for op in self.ops:
            if isinstance(op, Segment):
                if not (math.isfinite(op.duration) and op.duration >= 0):
                    out.append(f"segment duration must be finite and >= 0, got {op.duration!r}")
                if len(op.settings) != self.n_total:
                    out.append(
                        f"segment has {len(op.settings)} settings, expected {self.n_total}"
                    )
            elif isinstance(op, PiPulse):
                out += [p for p in [self._check_qubit(op.qubit, "pi pulse")] if p]
            elif isinstance(op, PhaseGate):
                out += [p for p in [self._check_qubit(op.qubit, "phase gate")] if p]
                if not math.isfinite(op.theta):
                    out.append("phase angle must be finite")
            elif isinstance(op, CustomGate):
                out += [p for q in op.qubits if (p := self._check_qubit(q, "gate"))]
                out += custom_gate_problems(op)
            else:
                out.append(f"unknown schedule element {op!r}")
        total = self.total_duration if not out else math.inf
        for spec in self.samples:
            if isinstance(spec, SampleRange):
                if not spec.step > 0 or not math.isfinite(spec.step):
                    out.append(f"sample step must be > 0, got {spec.step!r}")
                    continue
                if spec.stop < spec.start:
                    out.append(f"sample range {spec.start}..{spec.stop} is reversed")
                    continue
            times = spec.times()
            if isinstance(spec, SamplePoints) and np.any(np.diff(times) < 0):
                out.append("sample times must be sorted")
            bad = [t for t in times if not (-TIME_TOL <= t <= total + TIME_TOL)]
            if bad:
                out.append(
                    f"sample times outside the schedule [0, {total!r}] ns: "
                    + ", ".join(repr(float(t)) for t in bad[:5])
                    + (" ..." if len(bad) > 5 else "")
                )
        return out

    # -- derived views ------------------------------------------------------

    @property
    def total_duration(self) -> float:
        return float(sum(op.duration for op in self.ops if isinstance(op, Segment)))

    @property
    def segments(self) -> list[Segment]:
        return [op for op in self.ops if isinstance(op, Segment)]

    def gate_sets(self) -> list[tuple[GateEvent, ...]]:
        """Maximal runs of consecutive gate events."""
        sets, cur = [], []
        for op in self.ops:
            if isinstance(op, Segment):
                if cur:
                    sets.append(tuple(cur))
                cur = []
            else:
                cur.append(op)
        if cur:
            sets.append(tuple(cur))
        return sets

    def sample_times(self) -> np.ndarray:
        if not self.samples:
            return np.array([])
        return np.unique(np.concatenate([s.times() for s in self.samples]))

    def segment_starts(self) -> list[float]:
        t, out = 0.0, []
        for seg in self.segments:
            out.append(t)
            t += seg.duration
        return out


def custom_gate_problems(op: CustomGate) -> list[str]:
    out = []
    nq = len(op.qubits)
    if nq not in (1, 2):
        return [f"custom gates act on 1 or 2 qubits, got {nq}"]
    if len(set(op.qubits)) != nq:
        out.append("custom gate qubits must be distinct")
    m = op.matrix()
    if m.shape != (2**nq, 2**nq):
        return out + [f"{nq}-qubit gate needs a {2**nq}x{2**nq} matrix, got {m.shape}"]
    if not np.all(np.isfinite(m)):
        return out + ["gate matrix has non-finite entries"]
    err = np.max(np.abs(m.conj().T @ m - np.eye(2**nq)))
    if err > 1e-10:
        out.append(f"gate matrix is not unitary (max |U^dag U - 1| = {err:.3g})")
    return out
