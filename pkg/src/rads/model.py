"""Excitation-number sectors and the Tavis-Cummings Hamiltonian.

N two-level qubits couple to one resonator mode through

    H = w_R a^dag a + sum_j w_j n_j + sum_j g_j (s_j^+ a + s_j^- a^dag)
        + sum_{j<k} chi_jk (s_j^+ s_k^- + h.c.)

Total excitation a^dag a + sum_j n_j is conserved, so the Hamiltonian is
assembled one sector (or a direct sum of sectors) at a time.  Everything is
written in the frame rotating at the resonator frequency; the numeric core
uses angular frequencies in rad/ns and times in ns.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Sequence, Union

import numpy as np

TWO_PI = 2.0 * math.pi

#: Tunable range of the qubits, GHz.  Outside it only a warning is issued.
TUNABLE_BAND_GHZ = (5.0, 6.0)


def mhz_to_angular(f_mhz):
    """Ordinary frequency in MHz -> angular frequency in rad/ns."""
    return TWO_PI * np.asarray(f_mhz, dtype=float) * 1e-3


def angular_to_mhz(w):
    """Angular frequency in rad/ns -> ordinary frequency in MHz."""
    return np.asarray(w, dtype=float) * 1e3 / TWO_PI


def ghz_to_angular(f_ghz):
    return TWO_PI * np.asarray(f_ghz, dtype=float)


def angular_to_ghz(w):
    return np.asarray(w, dtype=float) / TWO_PI


# ---------------------------------------------------------------------------
# basis
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class BasisConfig:
    """One product basis state: qubit occupations plus resonator Fock number."""

    qubit_bits: tuple[int, ...]
    photons: int

    @property
    def excitation(self) -> int:
        return sum(self.qubit_bits) + self.photons

    def label(self) -> str:
        return "|" + "".join(map(str, self.qubit_bits)) + f",{self.photons}>"


class _SpaceBase:
    """Shared lookup behaviour of single sectors and direct sums."""

    n_qubits: int
    n_max: int
    basis: tuple[BasisConfig, ...]
    _index: dict

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def config_of(self, i: int) -> BasisConfig:
        return self.basis[i]

    def index_of(self, config: BasisConfig) -> int:
        try:
            return self._index[config]
        except KeyError:
            raise KeyError(f"{config.label()} is not in this space") from None

    def __contains__(self, config) -> bool:
        return config in self._index

    def bits(self) -> np.ndarray:
        """(dimension, n_qubits) integer array of qubit occupations."""
        return np.array([c.qubit_bits for c in self.basis], dtype=int).reshape(
            len(self.basis), self.n_qubits
        )

    def photon_numbers(self) -> np.ndarray:
        return np.array([c.photons for c in self.basis], dtype=int)

    def excitations(self) -> np.ndarray:
        return np.array([c.excitation for c in self.basis], dtype=int)


@dataclass(frozen=True, eq=False)
class SectorSpace(_SpaceBase):
    """Basis of the fixed total-excitation subspace with photon cutoff ``n_max``.

    Ordering is descending photon number, then lexicographic (descending)
    qubit bits, e.g. ``(2, 1, 2)`` gives ``|00,1>, |10,0>, |01,0>``.
    """

    n_qubits: int
    k: int
    n_max: int
    basis: tuple[BasisConfig, ...] = field(repr=False)
    _index: dict = field(repr=False, compare=False)

    @property
    def ks(self) -> tuple[int, ...]:
        return (self.k,)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SectorSpace)
            and (self.n_qubits, self.k, self.n_max)
            == (other.n_qubits, other.k, other.n_max)
        )

    def __hash__(self) -> int:
        return hash(("sector", self.n_qubits, self.k, self.n_max))


@dataclass(frozen=True, eq=False)
class SectorSum(_SpaceBase):
    """Direct sum of consecutive sectors sharing ``n_qubits`` and ``n_max``."""

    n_qubits: int
    n_max: int
    sectors: tuple[SectorSpace, ...]
    basis: tuple[BasisConfig, ...] = field(repr=False)
    _index: dict = field(repr=False, compare=False)

    @property
    def ks(self) -> tuple[int, ...]:
        return tuple(s.k for s in self.sectors)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SectorSum)
            and (self.n_qubits, self.n_max, self.ks)
            == (other.n_qubits, other.n_max, other.ks)
        )

    def __hash__(self) -> int:
        return hash(("sum", self.n_qubits, self.n_max, self.ks))


Space = Union[SectorSpace, SectorSum]


def sector_dimension(n_qubits: int, k: int, n_max: int) -> int:
    """Closed-form size of a sector: sum_p C(n_qubits, k - p), 0 <= p <= min(k, n_max)."""
    return sum(
        math.comb(n_qubits, k - p)
        for p in range(min(k, n_max) + 1)
        if k - p <= n_qubits
    )


@lru_cache(maxsize=None)
def enumerate_sector(n_qubits: int, k: int, n_max: int) -> SectorSpace:
    """Enumerate the basis of the k-excitation sector.

    Parameters
    ----------
    n_qubits : int
        Number of qubits, at least 1.
    k : int
        Total excitation, ``0 <= k <= n_qubits + n_max``.
    n_max : int
        Photon-number cutoff of the resonator.
    """
    if isinstance(n_qubits, bool) or int(n_qubits) != n_qubits or n_qubits < 1:
        raise ValueError(f"n_qubits must be a positive integer, got {n_qubits!r}")
    if int(n_max) != n_max or n_max < 0:
        raise ValueError(f"photon cutoff n_max must be >= 0, got {n_max!r}")
    if int(k) != k or not 0 <= k <= n_qubits + n_max:
        raise ValueError(
            f"excitation k={k!r} outside [0, n_qubits + n_max] = [0, {n_qubits + n_max}]"
        )
    basis = []
    for p in range(min(k, n_max), -1, -1):
        m = k - p
        if m > n_qubits:
            continue
        # combinations() in lexicographic order of positions == descending bit strings
        for excited in combinations(range(n_qubits), m):
            bits = [0] * n_qubits
            for j in excited:
                bits[j] = 1
            basis.append(BasisConfig(tuple(bits), p))
    basis = tuple(basis)
    return SectorSpace(
        n_qubits, k, n_max, basis, {c: i for i, c in enumerate(basis)}
    )


def sector_sum(n_qubits: int, ks: Sequence[int], n_max: int) -> Space:
    """Direct sum of the sectors ``ks`` (a single sector if only one is given)."""
    ks = sorted(set(int(k) for k in ks))
    if not ks:
        raise ValueError("need at least one sector")
    if len(ks) == 1:
        return enumerate_sector(n_qubits, ks[0], n_max)
    sectors = tuple(enumerate_sector(n_qubits, k, n_max) for k in ks)
    basis = tuple(c for s in sectors for c in s.basis)
    return SectorSum(
        n_qubits, n_max, sectors, basis, {c: i for i, c in enumerate(basis)}
    )


# ---------------------------------------------------------------------------
# device
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QubitSetting:
    """Frequency setting of one qubit during a segment.

    ``mode`` is ``"resonant"``, ``"detuned"`` (with ``detuning_mhz`` relative
    to the resonator) or ``"idle"`` (parked at the qubit's idle frequency).
    """

    mode: str = "idle"
    detuning_mhz: float = 0.0

    def __post_init__(self):
        if self.mode not in ("resonant", "detuned", "idle"):
            raise ValueError(f"unknown qubit mode {self.mode!r}")
        if self.mode != "detuned" and self.detuning_mhz != 0.0:
            raise ValueError("only detuned settings carry a detuning")
        if not math.isfinite(self.detuning_mhz):
            raise ValueError("detuning must be finite")

    @classmethod
    def resonant(cls) -> "QubitSetting":
        return cls("resonant")

    @classmethod
    def idle(cls) -> "QubitSetting":
        return cls("idle")

    @classmethod
    def detuned(cls, detuning_mhz: float) -> "QubitSetting":
        return cls("detuned", float(detuning_mhz))


RESONANT = QubitSetting.resonant()
IDLE = QubitSetting.idle()


@dataclass(frozen=True, eq=False)
class DeviceConfig:
    """Resonator + qubit parameters.

    Frequencies are ordinary frequencies: ``omega_r_ghz`` and
    ``omega_idle_ghz`` in GHz, couplings ``g_mhz`` and crosstalk ``chi_mhz`` in
    MHz.  ``n_max`` is the photon cutoff (``None`` lets the compiler choose
    ``k + 1``).  With ``idle_decoupled`` set, a qubit parked at its idle
    frequency keeps its dynamical phase but drops its couplings, i.e. it is
    treated as far detuned and ignored.
    """

    omega_r_ghz: float
    omega_idle_ghz: tuple[float, ...]
    g_mhz: tuple[float, ...]
    chi_mhz: np.ndarray = None
    n_max: int | None = None
    idle_decoupled: bool = True

    def __post_init__(self):
        g = tuple(float(x) for x in np.atleast_1d(self.g_mhz))
        idle = np.atleast_1d(np.asarray(self.omega_idle_ghz, dtype=float))
        if idle.size == 1:
            idle = np.full(len(g), idle[0])
        if len(idle) != len(g):
            raise ValueError(
                f"{len(idle)} idle frequencies for {len(g)} qubits"
            )
        if any(not (x > 0 and math.isfinite(x)) for x in g):
            raise ValueError(f"couplings must be positive and finite, got {g}")
        n = len(g)
        chi = (
            np.zeros((n, n))
            if self.chi_mhz is None
            else np.array(self.chi_mhz, dtype=float)
        )
        if chi.shape != (n, n):
            raise ValueError(f"crosstalk matrix must be {n}x{n}, got {chi.shape}")
        if not np.array_equal(chi, chi.T) or np.any(np.diag(chi) != 0):
            raise ValueError("crosstalk must be symmetric with zero diagonal")
        if self.n_max is not None and (int(self.n_max) != self.n_max or self.n_max < 0):
            raise ValueError(f"n_max must be a non-negative integer, got {self.n_max}")
        lo, hi = TUNABLE_BAND_GHZ
        out = [j for j, f in enumerate(idle) if not lo <= f <= hi]
        if out:
            warnings.warn(
                f"idle frequencies of qubits {out} lie outside the {lo}-{hi} GHz band",
                stacklevel=3,
            )
        chi.setflags(write=False)
        object.__setattr__(self, "g_mhz", g)
        object.__setattr__(self, "omega_idle_ghz", tuple(float(x) for x in idle))
        object.__setattr__(self, "chi_mhz", chi)

    @property
    def n_qubits(self) -> int:
        return len(self.g_mhz)

    @property
    def g_mean_mhz(self) -> float:
        return float(np.mean(self.g_mhz))

    @property
    def idle_detuning_mhz(self) -> np.ndarray:
        return (np.array(self.omega_idle_ghz) - self.omega_r_ghz) * 1e3

    def __eq__(self, other) -> bool:
        if not isinstance(other, DeviceConfig):
            return NotImplemented
        return (
            self.omega_r_ghz == other.omega_r_ghz
            and self.omega_idle_ghz == other.omega_idle_ghz
            and self.g_mhz == other.g_mhz
            and np.array_equal(self.chi_mhz, other.chi_mhz)
            and self.n_max == other.n_max
            and self.idle_decoupled == other.idle_decoupled
        )

    __hash__ = None

    @classmethod
    def homogeneous(
        cls,
        n_qubits: int,
        g_mhz: float = 13.5,
        omega_r_ghz: float = 5.69,
        idle_detuning_mhz: float = -300.0,
        **kw,
    ) -> "DeviceConfig":
        return cls(
            omega_r_ghz=omega_r_ghz,
            omega_idle_ghz=(omega_r_ghz + idle_detuning_mhz * 1e-3,) * n_qubits,
            g_mhz=(g_mhz,) * n_qubits,
            **kw,
        )

    def subset(self, n: int) -> "DeviceConfig":
        """The first ``n`` qubits of the device."""
        if n > self.n_qubits:
            raise ValueError(f"device has {self.n_qubits} qubits, {n} requested")
        return DeviceConfig(
            self.omega_r_ghz,
            self.omega_idle_ghz[:n],
            self.g_mhz[:n],
            self.chi_mhz[:n, :n],
            self.n_max,
            self.idle_decoupled,
        )

    def with_disorder(
        self, g_pct: float = 0.0, crosstalk_mhz: float = 0.0, seed: int = 0
    ) -> "DeviceConfig":
        """Seeded imperfections.

        Each coupling is scaled by ``1 + u`` with ``u ~ U(-g_pct, g_pct)/100``;
        every pair gets an additional crosstalk drawn from
        ``U(-crosstalk_mhz, crosstalk_mhz)``.
        """
        rng = np.random.default_rng(seed)
        n = self.n_qubits
        g = np.array(self.g_mhz) * (1.0 + rng.uniform(-1, 1, n) * g_pct / 100.0)
        upper = np.triu(rng.uniform(-1, 1, (n, n)) * crosstalk_mhz, 1)
        chi = self.chi_mhz + upper + upper.T
        return DeviceConfig(
            self.omega_r_ghz,
            self.omega_idle_ghz,
            tuple(g),
            chi,
            self.n_max,
            self.idle_decoupled,
        )


def _detunings(config: DeviceConfig, settings: Sequence[QubitSetting]):
    """Per-qubit detuning (MHz) and coupled flag for one segment."""
    idle = config.idle_detuning_mhz
    delta = np.empty(len(settings))
    coupled = np.ones(len(settings), dtype=bool)
    for j, s in enumerate(settings):
        if s.mode == "resonant":
            delta[j] = 0.0
        elif s.mode == "detuned":
            delta[j] = s.detuning_mhz
        else:
            delta[j] = idle[j]
            coupled[j] = not config.idle_decoupled
    return delta, coupled


def build_hamiltonian(
    config: DeviceConfig, settings: Sequence[QubitSetting], space: Space
) -> np.ndarray:
    """Rotating-frame Hamiltonian on ``space`` in rad/ns.

    The matrix is real symmetric: diagonal entries are the summed detunings
    of excited qubits, off-diagonals are ``g_j sqrt(n)`` between ``|.., 0_j, n>``
    and ``|.., 1_j, n-1>`` plus crosstalk flip-flops.
    """
    n = space.n_qubits
    if len(settings) != n:
        raise ValueError(f"{len(settings)} qubit settings for a {n}-qubit space")
    if config.n_qubits < n:
        raise ValueError(f"device has {config.n_qubits} qubits, space needs {n}")
    delta_mhz, coupled = _detunings(config, settings)
    delta = mhz_to_angular(delta_mhz)
    g = mhz_to_angular(config.g_mhz[:n])
    chi = mhz_to_angular(config.chi_mhz[:n, :n])

    dim = space.dimension
    H = np.zeros((dim, dim))
    index = space._index
    for i, c in enumerate(space.basis):
        bits = c.qubit_bits
        H[i, i] = sum(delta[j] for j in range(n) if bits[j])
        # photon absorbed by qubit j: |0_j, p> -> |1_j, p-1>
        if c.photons > 0:
            amp = math.sqrt(c.photons)
            for j in range(n):
                if bits[j] or not coupled[j]:
                    continue
                target = BasisConfig(
                    bits[:j] + (1,) + bits[j + 1:], c.photons - 1
                )
                t = index.get(target)
                if t is not None:
                    H[t, i] = H[i, t] = g[j] * amp
        # crosstalk flip-flop: excitation hops from qubit j to qubit k
        for j in range(n):
            if not bits[j] or not coupled[j]:
                continue
            for k in range(n):
                if bits[k] or not coupled[k] or chi[j, k] == 0.0:
                    continue
                flipped = list(bits)
                flipped[j], flipped[k] = 0, 1
                t = index[BasisConfig(tuple(flipped), c.photons)]
                H[t, i] = H[i, t] = chi[j, k]
    return H


def excitation_operator(space: Space) -> np.ndarray:
    """Diagonal of a^dag a + sum_j n_j on ``space``."""
    return space.excitations().astype(float)
