# %% [markdown]
# # Bright, dark and singlet states
#
# A single excitation shared by N qubits with phases exp(-i m 2 pi j / N) is
# a spin wave.  m = 0 gives the bright state, whose overlap with the resonator
# grows as sqrt(N).  Every other m gives a dark state that cannot emit.

# %%
import numpy as np

from rads.model import BasisConfig, DeviceConfig, QubitSetting, build_hamiltonian, enumerate_sector
from rads.states import (
    apply_phase_gates,
    bright_state,
    collective_lowering,
    collective_raising,
    dark_state,
    fidelity,
    singlet4,
    spin_wave_phases,
    vector_norm,
)

n = 6
space = enumerate_sector(n, 1, 2)
H = build_hamiltonian(DeviceConfig.homogeneous(n), [QubitSetting.resonant()] * n, space)
row = H[space.index_of(BasisConfig((0,) * n, 1))]
g = 2 * np.pi * 13.5e-3
print("bright element / g:", abs(row @ bright_state(n).amplitudes) / g, "sqrt(N) =", np.sqrt(n))
for m in range(1, n):
    print(f"dark m={m} element: {abs(row @ dark_state(n, m).amplitudes):.1e}")

# %% [markdown]
# Single-qubit Z rotations move between the two families, which is what the
# switching protocol relies on.

# %%
d = dark_state(n, 2)
b = apply_phase_gates(d, spin_wave_phases(n, 2))
print("fidelity with bright after phase gates:", fidelity(b, bright_state(n)))

# %% [markdown]
# The four-qubit two-excitation singlet is killed by both the collective raising
# and lowering operators, so it can neither emit nor absorb.

# %%
s = singlet4()
print({c.label(): round(a.real, 3) for c, a in s.as_dict().items() if abs(a) > 0})
print("|S+ psi|:", vector_norm(collective_raising(s)), " |S- psi|:", vector_norm(collective_lowering(s)))
