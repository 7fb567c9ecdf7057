import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rads.model import (
    BasisConfig,
    DeviceConfig,
    QubitSetting,
    angular_to_ghz,
    angular_to_mhz,
    build_hamiltonian,
    enumerate_sector,
    ghz_to_angular,
    mhz_to_angular,
    sector_dimension,
    sector_sum,
)
from rads.states import bright_state

from conftest import G_ANG, G_MHZ

R, I = QubitSetting.resonant(), QubitSetting.idle()


def brute_force_sector(n, k, n_max):
    """Every (bits, photons) with the right excitation, by exhaustive search."""
    return {
        BasisConfig(bits, p)
        for bits in itertools.product((0, 1), repeat=n)
        for p in range(n_max + 1)
        if sum(bits) + p == k
    }


def full_space_hamiltonian(config, settings, n_max):
    """Tensor-product construction of the rotating-frame Hamiltonian.

    Ordering: qubit 0 is the most significant factor, the resonator is last.
    """
    n = len(settings)
    a = np.diag(np.sqrt(np.arange(1, n_max + 1)), 1)
    sm = np.array([[0, 1], [0, 0]], dtype=float)  # |0><1|
    eye2, eyer = np.eye(2), np.eye(n_max + 1)

    def op(single, j):
        mats = [eye2] * n + [eyer]
        mats[j] = single
        out = mats[0]
        for m in mats[1:]:
            out = np.kron(out, m)
        return out

    A = op(a, n)
    lowers = [op(sm, j) for j in range(n)]
    idle = (np.array(config.omega_idle_ghz) - config.omega_r_ghz) * 1e3
    dim = 2**n * (n_max + 1)
    H = np.zeros((dim, dim))
    coupled = []
    for j, s in enumerate(settings):
        d = {"resonant": 0.0, "detuned": s.detuning_mhz, "idle": idle[j]}[s.mode]
        H += mhz_to_angular(d) * lowers[j].T @ lowers[j]
        coupled.append(s.mode != "idle" or not config.idle_decoupled)
    for j in range(n):
        if coupled[j]:
            H += mhz_to_angular(config.g_mhz[j]) * (lowers[j].T @ A + lowers[j] @ A.T)
        for k in range(j + 1, n):
            if coupled[j] and coupled[k]:
                H += mhz_to_angular(config.chi_mhz[j, k]) * (
                    lowers[j].T @ lowers[k] + lowers[k].T @ lowers[j]
                )
    return H


def full_index(c, n_max):
    idx = 0
    for b in c.qubit_bits:
        idx = 2 * idx + b
    return idx * (n_max + 1) + c.photons


# -- enumerate_sector --------------------------------------------------------


def test_two_qubits_one_excitation():
    s = enumerate_sector(2, 1, 2)
    assert s.dimension == 3
    assert [c.label() for c in s.basis] == ["|00,1>", "|10,0>", "|01,0>"]


def test_ten_qubits_one_excitation():
    assert enumerate_sector(10, 1, 2).dimension == 11


def test_four_qubits_two_excitations_against_enumeration():
    s = enumerate_sector(4, 2, 2)
    assert s.dimension == 11 == math.comb(4, 2) + math.comb(4, 1) + math.comb(4, 0)
    assert set(s.basis) == brute_force_sector(4, 2, 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 4), st.data())
def test_sector_matches_exhaustive_search(n, n_max, data):
    k = data.draw(st.integers(0, n + n_max))
    s = enumerate_sector(n, k, n_max)
    assert set(s.basis) == brute_force_sector(n, k, n_max)
    assert s.dimension == sector_dimension(n, k, n_max) == len(set(s.basis))
    for i in range(s.dimension):
        assert s.index_of(s.config_of(i)) == i


def test_ordering_is_photons_descending_then_bits_descending():
    s = enumerate_sector(3, 2, 3)
    keys = [(-c.photons, tuple(-b for b in c.qubit_bits)) for c in s.basis]
    assert keys == sorted(keys)


@pytest.mark.parametrize("args", [(0, 1, 2), (2, -1, 2), (2, 5, 2), (2, 1, -1), (1.5, 1, 1)])
def test_invalid_bounds_rejected(args):
    with pytest.raises(ValueError):
        enumerate_sector(*args)


def test_sector_sum_is_concatenation():
    s = sector_sum(3, [0, 2, 1], 2)
    assert s.ks == (0, 1, 2)
    assert s.dimension == sum(enumerate_sector(3, k, 2).dimension for k in (0, 1, 2))
    assert sector_sum(3, [1], 2) == enumerate_sector(3, 1, 2)


# -- units -----------------------------------------------------------------


@given(st.floats(1e-3, 1e4))
def test_unit_round_trip(x):
    assert abs(angular_to_mhz(mhz_to_angular(x)) - x) <= 1e-12 * x
    assert abs(angular_to_ghz(ghz_to_angular(x)) - x) <= 1e-12 * x


def test_g_in_angular_units():
    assert G_ANG == pytest.approx(2 * math.pi * 0.0135, rel=1e-15)


# -- device ----------------------------------------------------------------


def test_device_validation():
    with pytest.raises(ValueError):
        DeviceConfig(5.69, (5.4,), (0.0,))
    with pytest.raises(ValueError):
        DeviceConfig(5.69, (5.4, 5.4), (13.5, 13.5), chi_mhz=[[0, 0.1], [0.2, 0]])
    with pytest.raises(ValueError):
        DeviceConfig(5.69, (5.4, 5.4), (13.5, 13.5), chi_mhz=[[0.1, 0], [0, 0]])
    with pytest.warns(UserWarning, match="outside"):
        DeviceConfig(5.69, (4.0,), (13.5,))


def test_disorder_is_seeded_and_symmetric():
    d = DeviceConfig.homogeneous(5)
    a = d.with_disorder(5, 0.2, seed=3)
    b = d.with_disorder(5, 0.2, seed=3)
    assert a == b and a != d.with_disorder(5, 0.2, seed=4)
    assert np.allclose(a.chi_mhz, a.chi_mhz.T) and np.all(np.abs(a.chi_mhz) <= 0.2)
    assert np.all(np.abs(np.array(a.g_mhz) / 13.5 - 1) <= 0.05)


# -- build_hamiltonian -----------------------------------------------------


def test_single_qubit_resonant_block():
    dev = DeviceConfig.homogeneous(1)
    H = build_hamiltonian(dev, [R], enumerate_sector(1, 1, 2))
    np.testing.assert_allclose(H, [[0, G_ANG], [G_ANG, 0]], rtol=0, atol=1e-15)


def test_single_qubit_detuned_block():
    dev = DeviceConfig.homogeneous(1)
    H = build_hamiltonian(dev, [QubitSetting.detuned(7.0)], enumerate_sector(1, 1, 2))
    np.testing.assert_allclose(H, [[0, G_ANG], [G_ANG, mhz_to_angular(7.0)]], atol=1e-15)


def test_two_qubit_eigenvalues_carry_sqrt2():
    dev = DeviceConfig.homogeneous(2)
    H = build_hamiltonian(dev, [R, R], enumerate_sector(2, 1, 2))
    np.testing.assert_allclose(
        np.linalg.eigvalsh(H), [-math.sqrt(2) * G_ANG, 0, math.sqrt(2) * G_ANG], atol=1e-15
    )


def random_device(rng, n, idle_decoupled=True):
    g = rng.uniform(8, 20, n)
    chi = np.triu(rng.uniform(-0.5, 0.5, (n, n)), 1)
    return DeviceConfig(
        5.69, tuple(rng.uniform(5.2, 5.6, n)), tuple(g), chi + chi.T,
        idle_decoupled=idle_decoupled,
    )


def random_settings(rng, n):
    out = []
    for _ in range(n):
        mode = rng.choice(["resonant", "detuned", "idle"])
        out.append(QubitSetting.detuned(rng.uniform(-40, 40)) if mode == "detuned" else QubitSetting(mode))
    return out


@pytest.mark.parametrize("seed", range(12))
def test_hamiltonian_matches_tensor_product_construction(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5))
    n_max = int(rng.integers(1, 4))
    k = int(rng.integers(0, n + n_max + 1))
    dev = random_device(rng, n, idle_decoupled=bool(seed % 2))
    settings_ = random_settings(rng, n)
    space = enumerate_sector(n, k, n_max)
    H = build_hamiltonian(dev, settings_, space)
    full = full_space_hamiltonian(dev, settings_, n_max)
    idx = [full_index(c, n_max) for c in space.basis]
    np.testing.assert_allclose(H, full[np.ix_(idx, idx)], atol=1e-14)
    # block structure: nothing in the full matrix leaves the sector
    others = [i for i in range(full.shape[0]) if i not in idx]
    assert np.all(full[np.ix_(others, idx)] == 0)


@pytest.mark.parametrize("seed", range(8))
def test_hermitian_exactly_and_sector_closed(seed):
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(1, 5))
    dev = random_device(rng, n)
    space = sector_sum(n, [0, 1, 2], 3)
    H = build_hamiltonian(dev, random_settings(rng, n), space)
    assert np.max(np.abs(H - H.conj().T)) == 0.0
    k = space.excitations()
    rows, cols = np.nonzero(H)
    assert np.all(k[rows] == k[cols])


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 10])
def test_bright_eigenpair(n):
    dev = DeviceConfig.homogeneous(n)
    space = enumerate_sector(n, 1, 2)
    H = build_hamiltonian(dev, [R] * n, space)
    w, v = np.linalg.eigh(H)
    expected = np.sort(np.r_[-math.sqrt(n) * G_ANG, np.zeros(n - 1), math.sqrt(n) * G_ANG])
    np.testing.assert_allclose(w, expected, atol=1e-14)
    b = bright_state(n)
    bright = np.array([b.amplitude(c) for c in space.basis])
    vac = np.zeros(space.dimension)
    vac[space.index_of(BasisConfig((0,) * n, 1))] = 1.0
    for sign, col in ((+1, -1), (-1, 0)):
        target = (bright + sign * vac) / math.sqrt(2)
        assert abs(abs(np.vdot(target, v[:, col])) - 1) < 1e-12


def test_settings_length_mismatch():
    dev = DeviceConfig.homogeneous(2)
    with pytest.raises(ValueError):
        build_hamiltonian(dev, [R], enumerate_sector(2, 1, 2))


def test_idle_decoupling_switch():
    coupled = DeviceConfig.homogeneous(1, idle_decoupled=False)
    free = DeviceConfig.homogeneous(1)
    space = enumerate_sector(1, 1, 2)
    assert build_hamiltonian(coupled, [I], space)[0, 1] == pytest.approx(G_ANG)
    H = build_hamiltonian(free, [I], space)
    assert H[0, 1] == 0 and H[1, 1] == pytest.approx(mhz_to_angular(-300.0))
