"""Collective single- and two-excitation states and ideal gate actions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .model import BasisConfig, Space, enumerate_sector, sector_sum

NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over a sector (or a direct sum of sectors)."""

    space: Space
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.space.dimension,):
            raise ValueError(
                f"{amps.shape[0] if amps.ndim == 1 else amps.shape} amplitudes "
                f"for a space of dimension {self.space.dimension}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalised (norm {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self) -> int:
        return self.space.n_qubits

    def amplitude(self, config: BasisConfig | str, photons: int = 0) -> complex:
        """Amplitude of a basis state; ``config`` may be a bit string like ``"1100"``."""
        if isinstance(config, str):
            config = BasisConfig(tuple(int(b) for b in config), photons)
        if config not in self.space:
            return 0j
        return complex(self.amplitudes[self.space.index_of(config)])

    def as_dict(self) -> dict[BasisConfig, complex]:
        return {c: complex(a) for c, a in zip(self.space.basis, self.amplitudes)}

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    # -- observables -------------------------------------------------------

    def qubit_populations(self) -> np.ndarray:
        probs = np.abs(self.amplitudes) ** 2
        return probs @ self.space.bits()

    def photon_distribution(self) -> np.ndarray:
        probs = np.abs(self.amplitudes) ** 2
        return np.bincount(
            self.space.photon_numbers(), weights=probs, minlength=self.space.n_max + 1
        )

    def mean_photon(self) -> float:
        probs = np.abs(self.amplitudes) ** 2
        return float(probs @ self.space.photon_numbers())

    def mean_excitation(self) -> float:
        probs = np.abs(self.amplitudes) ** 2
        return float(probs @ self.space.excitations())

    # -- text format ---------------------------------------------------------

    def to_text(self) -> str:
        """One line per basis state: ``index real imag``."""
        lines = [
            f"# n_qubits={self.space.n_qubits} ks={','.join(map(str, self.space.ks))} "
            f"n_max={self.space.n_max}"
        ]
        for i, a in enumerate(self.amplitudes):
            lines.append(f"{i} {float(a.real)!r} {float(a.imag)!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "StateVector":
        header, *rows = [ln for ln in text.splitlines() if ln.strip()]
        fields = dict(item.split("=") for item in header.lstrip("# ").split())
        space = sector_sum(
            int(fields["n_qubits"]),
            [int(k) for k in fields["ks"].split(",")],
            int(fields["n_max"]),
        )
        amps = np.zeros(space.dimension, dtype=complex)
        for row in rows:
            i, re, im = row.split()
            amps[int(i)] = complex(float(re), float(im))
        return cls(space, amps)


def from_amplitudes(space: Space, amplitudes: dict[BasisConfig, complex]) -> StateVector:
    amps = np.zeros(space.dimension, dtype=complex)
    for c, a in amplitudes.items():
        amps[space.index_of(c)] = a
    return StateVector(space, amps)


def basis_state(space: Space, config: BasisConfig) -> StateVector:
    return from_amplitudes(space, {config: 1.0})


def _single_excitation(n: int, amps: Sequence[complex], n_max: int) -> StateVector:
    space = enumerate_sector(n, 1, n_max)
    out = {}
    for j, a in enumerate(amps):
        bits = [0] * n
        bits[j] = 1
        out[BasisConfig(tuple(bits), 0)] = a
    return from_amplitudes(space, out)


def spin_wave_phases(n: int, m: int = 1) -> np.ndarray:
    """m * phi_j with phi_j = 2 pi j / n for j = 1..n."""
    j = np.arange(1, n + 1)
    return m * j * 2.0 * np.pi / n


def bright_state(n: int, n_max: int = 2) -> StateVector:
    """Symmetric single excitation (1/sqrt(n)) sum_j |0..1_j..0>, resonator empty."""
    if int(n) != n or n < 1:
        raise ValueError(f"bright state needs N >= 1, got {n!r}")
    return _single_excitation(n, [1.0 / math.sqrt(n)] * n, n_max)


def dark_state(n: int, m: int = 1, n_max: int = 2) -> StateVector:
    """Spin-wave state with amplitude exp(-i m phi_j)/sqrt(n) on qubit j.

    ``m`` must lie in 1..n-1; m = 0 or n reproduces the bright state.
    """
    if int(n) != n or n < 2:
        raise ValueError(f"dark states need N >= 2, got {n!r}")
    if int(m) != m or not 1 <= m <= n - 1:
        raise ValueError(f"spin-wave index m={m!r} outside 1..{n - 1}")
    return _single_excitation(
        n, np.exp(-1j * spin_wave_phases(n, m)) / math.sqrt(n), n_max
    )


def singlet4(n_max: int = 3) -> StateVector:
    """(|1100> - |0110> + |0011> - |1001>)/2 in the two-excitation sector.

    This is the product of two-qubit singlets (|10> - |01>)/sqrt(2) on the
    qubit pairs (1, 3) and (2, 4).
    """
    space = enumerate_sector(4, 2, n_max)
    terms = {"1100": 0.5, "0110": -0.5, "0011": 0.5, "1001": -0.5}
    return from_amplitudes(
        space, {BasisConfig(tuple(map(int, b)), 0): a for b, a in terms.items()}
    )


# ---------------------------------------------------------------------------
# comparisons
# ---------------------------------------------------------------------------


def overlap(a: StateVector, b: StateVector) -> complex:
    """<a|b>, matched by basis configuration so the two spaces may differ."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"{a.n_qubits}-qubit vs {b.n_qubits}-qubit states")
    bd = b.as_dict()
    return sum(
        (np.conj(amp) * bd[c] for c, amp in a.as_dict().items() if c in bd), 0j
    )


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2, insensitive to global phase."""
    return float(abs(overlap(a, b)) ** 2)


def embed(
    state: StateVector, before: int = 1, after: int = 0, n_max: int | None = None
) -> StateVector:
    """Add ``before`` (``after``) ground-state qubits in front of (behind) the register.

    Used to compare register-only states with runs that include the ancilla Q0.
    """
    space = state.space
    n_max = space.n_max if n_max is None else n_max
    new = sector_sum(space.n_qubits + before + after, space.ks, n_max)
    pad_b, pad_a = (0,) * before, (0,) * after
    return from_amplitudes(
        new,
        {
            BasisConfig(pad_b + c.qubit_bits + pad_a, c.photons): a
            for c, a in state.as_dict().items()
            if a != 0
        },
    )


# ---------------------------------------------------------------------------
# ideal gates
# ---------------------------------------------------------------------------


def apply_phase_gates(state: StateVector, thetas: Sequence[float]) -> StateVector:
    """Multiply each amplitude by exp(i sum_j theta_j bit_j)."""
    thetas = np.asarray(thetas, dtype=float)
    if thetas.shape != (state.n_qubits,):
        raise ValueError(
            f"{thetas.size} phase angles for {state.n_qubits} qubits"
        )
    phase = np.exp(1j * (state.space.bits() @ thetas))
    return StateVector(state.space, state.amplitudes * phase)


def sqrt_iswap() -> np.ndarray:
    """Square root of iSWAP in the basis |00>, |01>, |10>, |11>."""
    s = 1.0 / math.sqrt(2.0)
    return np.array(
        [[1, 0, 0, 0], [0, s, 1j * s, 0], [0, 1j * s, s, 0], [0, 0, 0, 1]],
        dtype=complex,
    )


def conserves_excitation(unitary: np.ndarray) -> bool:
    """True when a 1- or 2-qubit unitary never changes the number of excited qubits."""
    dim = unitary.shape[0]
    n = int(round(math.log2(dim)))
    weight = np.array([bin(i).count("1") for i in range(dim)])
    mask = weight[:, None] != weight[None, :]
    return n in (1, 2) and bool(np.all(np.abs(unitary[mask]) < 1e-12))


def local_gate_matrix(space: Space, qubits: Sequence[int], unitary: np.ndarray) -> np.ndarray:
    """Full-space matrix of an excitation-conserving gate on ``qubits``.

    Local basis order is big-endian over ``qubits`` (first listed qubit is the
    most significant bit), matching |00>, |01>, |10>, |11>.
    """
    unitary = np.asarray(unitary, dtype=complex)
    nq = len(qubits)
    if unitary.shape != (2**nq, 2**nq):
        raise ValueError(f"{unitary.shape} matrix for a {nq}-qubit gate")
    if not conserves_excitation(unitary):
        raise ValueError("gate does not conserve the number of excited qubits")
    dim = space.dimension
    out = np.zeros((dim, dim), dtype=complex)
    for i, c in enumerate(space.basis):
        bits = list(c.qubit_bits)
        col = 0
        for q in qubits:
            col = 2 * col + bits[q]
        for row in range(2**nq):
            amp = unitary[row, col]
            if amp == 0:
                continue
            new = list(bits)
            for pos, q in enumerate(qubits):
                new[q] = (row >> (nq - 1 - pos)) & 1
            out[space.index_of(BasisConfig(tuple(new), c.photons)), i] += amp
    return out


def apply_gate(
    state: StateVector, qubits: Sequence[int], unitary: np.ndarray
) -> StateVector:
    """Apply an excitation-conserving 1- or 2-qubit gate."""
    U = local_gate_matrix(state.space, qubits, unitary)
    return StateVector(state.space, U @ state.amplitudes)


def collective_raising(state: StateVector) -> dict[BasisConfig, complex]:
    """sum_k s_k^+ |state>, returned as a sparse dict (may leave the space)."""
    return _collective(state, 1)


def collective_lowering(state: StateVector) -> dict[BasisConfig, complex]:
    """sum_k s_k^- |state>."""
    return _collective(state, 0)


def _collective(state: StateVector, raise_to: int) -> dict[BasisConfig, complex]:
    out: dict[BasisConfig, complex] = {}
    for c, a in state.as_dict().items():
        if a == 0:
            continue
        for k, b in enumerate(c.qubit_bits):
            if b == raise_to:
                continue
            new = BasisConfig(
                c.qubit_bits[:k] + (raise_to,) + c.qubit_bits[k + 1:], c.photons
            )
            out[new] = out.get(new, 0j) + a
    return out


def vector_norm(sparse: dict[BasisConfig, complex]) -> float:
    return float(math.sqrt(sum(abs(v) ** 2 for v in sparse.values())))


def product_of_pairs(pairs: Iterable[tuple[int, int]], n: int, n_max: int = 3) -> StateVector:
    """Tensor product of singlets (|10> - |01>)/sqrt(2) on disjoint qubit pairs."""
    pairs = list(pairs)
    amps: dict[tuple[int, ...], complex] = {tuple([0] * n): 1.0 + 0j}
    for a, b in pairs:
        nxt = {}
        for bits, amp in amps.items():
            for ea, eb, sign in ((1, 0, 1.0), (0, 1, -1.0)):
                nb = list(bits)
                nb[a], nb[b] = ea, eb
                nxt[tuple(nb)] = amp * sign / math.sqrt(2.0)
        amps = nxt
    space = enumerate_sector(n, len(pairs), n_max)
    return from_amplitudes(space, {BasisConfig(b, 0): a for b, a in amps.items()})
