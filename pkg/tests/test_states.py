import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rads.model import BasisConfig, DeviceConfig, QubitSetting, build_hamiltonian, enumerate_sector
from rads.states import (
    StateVector,
    apply_gate,
    apply_phase_gates,
    bright_state,
    collective_lowering,
    collective_raising,
    dark_state,
    embed,
    fidelity,
    overlap,
    product_of_pairs,
    singlet4,
    spin_wave_phases,
    sqrt_iswap,
    vector_norm,
)

from conftest import G_ANG

R = QubitSetting.resonant()


def single(n, j):
    bits = [0] * n
    bits[j] = 1
    return BasisConfig(tuple(bits), 0)


def test_bright_small():
    assert bright_state(1).amplitude("1") == 1
    b2 = bright_state(2)
    assert b2.amplitude("10") == pytest.approx(1 / math.sqrt(2))
    assert b2.amplitude("01") == pytest.approx(1 / math.sqrt(2))


def test_bright_ten():
    b = bright_state(10)
    amps = [b.amplitude(single(10, j)) for j in range(10)]
    np.testing.assert_allclose(amps, 0.31622776601683794, rtol=1e-15)
    assert b.amplitude(BasisConfig((0,) * 10, 1)) == 0


def test_bright_rejects_zero():
    with pytest.raises(ValueError):
        bright_state(0)


def test_dark_two_is_singlet():
    d = dark_state(2, 1)
    assert d.amplitude("10") == pytest.approx(-1 / math.sqrt(2))
    assert d.amplitude("01") == pytest.approx(1 / math.sqrt(2))


def test_dark_four_amplitudes():
    # exp(-i j pi / 2) / 2 for j = 1..4
    d = dark_state(4, 1)
    amps = [d.amplitude(single(4, j)) for j in range(4)]
    np.testing.assert_allclose(amps, np.array([-1j, -1, 1j, 1]) / 2, atol=1e-15)


@pytest.mark.parametrize("m", [0, 4, -1])
def test_dark_index_range(m):
    with pytest.raises(ValueError):
        dark_state(4, m)


@pytest.mark.parametrize("n", range(2, 9))
def test_fourier_orthogonality(n):
    states = [bright_state(n)] + [dark_state(n, m) for m in range(1, n)]
    gram = np.array([[overlap(a, b) for b in states] for a in states])
    np.testing.assert_allclose(gram, np.eye(n), atol=1e-14)


@pytest.mark.parametrize("make", [lambda: bright_state(7), lambda: dark_state(7, 3), singlet4])
def test_normalised(make):
    assert abs(make().norm() - 1) < 1e-12


def test_singlet_amplitudes():
    s = singlet4()
    assert s.amplitude("1100") == 0.5
    assert s.amplitude("0110") == pytest.approx(cmath.exp(1j * math.pi) / 2)
    assert s.amplitude("0011") == pytest.approx(cmath.exp(2j * math.pi) / 2)
    assert s.amplitude("1001") == pytest.approx(cmath.exp(3j * math.pi) / 2)
    assert s.amplitude("1010") == 0
    assert s.amplitude("1100", photons=1) == 0


def test_singlet_is_product_of_pair_singlets():
    # explicit expansion of the two-pair product, qubits (1,3) and (2,4)
    prod = product_of_pairs([(0, 2), (1, 3)], 4)
    np.testing.assert_allclose(prod.amplitudes, singlet4().amplitudes, atol=1e-15)
    other = product_of_pairs([(0, 3), (1, 2)], 4)
    assert fidelity(other, singlet4()) < 0.3


def test_singlet_from_sqrt_iswap():
    space = enumerate_sector(4, 2, 3)
    psi = StateVector(space, np.eye(space.dimension)[space.index_of(BasisConfig((1, 1, 0, 0), 0))])
    psi = apply_gate(psi, (0, 2), sqrt_iswap())
    psi = apply_gate(psi, (1, 3), sqrt_iswap())
    psi = apply_phase_gates(psi, [0, 0, math.pi / 2, math.pi / 2])
    np.testing.assert_allclose(psi.amplitudes, singlet4().amplitudes, atol=1e-15)


def test_singlet_trapping():
    s = singlet4()
    assert vector_norm(collective_raising(s)) < 1e-14
    assert vector_norm(collective_lowering(s)) < 1e-14


def test_phase_gates_identity_and_length():
    d = dark_state(5, 2)
    np.testing.assert_array_equal(apply_phase_gates(d, [0] * 5).amplitudes, d.amplitudes)
    with pytest.raises(ValueError):
        apply_phase_gates(d, [0] * 4)


@pytest.mark.parametrize("n", range(2, 9))
def test_phase_gates_switch_dark_to_bright(n):
    out = apply_phase_gates(dark_state(n, 1), spin_wave_phases(n, 1))
    assert abs(fidelity(out, bright_state(n)) - 1) < 1e-12
    assert abs(out.norm() - 1) < 1e-15


@given(st.integers(2, 9), st.data())
def test_phase_gates_bright_to_any_dark(n, data):
    m = data.draw(st.integers(1, n - 1))
    out = apply_phase_gates(bright_state(n), -spin_wave_phases(n, m))
    assert abs(fidelity(out, dark_state(n, m)) - 1) < 1e-12


def ground_one_photon(n, space):
    return space.index_of(BasisConfig((0,) * n, 1))


@pytest.mark.parametrize("n", range(2, 11))
def test_dark_decoupling_and_bright_enhancement(n):
    dev = DeviceConfig.homogeneous(n)
    space = enumerate_sector(n, 1, 2)
    H = build_hamiltonian(dev, [R] * n, space)
    row = H[ground_one_photon(n, space)]
    b = bright_state(n)
    assert abs(abs(row @ b.amplitudes) - math.sqrt(n) * G_ANG) <= 1e-12
    for m in range(1, n):
        assert row @ dark_state(n, m).amplitudes == pytest.approx(0, abs=1e-15)


@pytest.mark.parametrize("n", range(3, 9))
def test_dark_absorption_element_brute_force(n):
    # build |D,1> in the k=2 sector, apply H, remove the component along
    # itself and measure what is left: the coupling out of |D,1>
    dev = DeviceConfig.homogeneous(n)
    k2 = enumerate_sector(n, 2, 3)
    H = build_hamiltonian(dev, [R] * n, k2)
    d = dark_state(n, 1)
    vec = np.zeros(k2.dimension, dtype=complex)
    for c, a in d.as_dict().items():
        if a == 0:
            continue
        vec[k2.index_of(BasisConfig(c.qubit_bits, 1))] = a
    image = H @ vec
    image -= np.vdot(vec, image) * vec
    assert np.linalg.norm(image) == pytest.approx(G_ANG * math.sqrt(n - 2), rel=1e-12)
    assert vector_norm(collective_raising(d)) == pytest.approx(math.sqrt(n - 2), rel=1e-12)


def test_embed_and_fidelity_across_spaces():
    b = bright_state(3)
    e = embed(b, before=1, n_max=3)
    assert e.n_qubits == 4
    assert e.amplitude("0100") == pytest.approx(1 / math.sqrt(3))
    assert fidelity(e, embed(b)) == pytest.approx(1.0)


def test_text_round_trip():
    s = dark_state(5, 2)
    back = StateVector.from_text(s.to_text())
    np.testing.assert_array_equal(back.amplitudes, s.amplitudes)
    assert back.space == s.space


def test_unnormalised_rejected():
    with pytest.raises(ValueError):
        StateVector(enumerate_sector(2, 1, 2), [1, 1, 0])
