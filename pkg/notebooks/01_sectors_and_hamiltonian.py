# %% [markdown]
# # Excitation sectors and the coupled Hamiltonian
#
# Under the rotating-wave approximation the total number of excitations
# (excited qubits plus photons) is conserved, so each sector can be handled on
# its own.  Even ten qubits with one excitation live in an 11-dimensional space.

# %%
import numpy as np

from rads.model import DeviceConfig, QubitSetting, build_hamiltonian, enumerate_sector

space = enumerate_sector(2, 1, n_max=2)
print([c.label() for c in space.basis])
for n in (4, 10):
    print(n, "qubits, k=1:", enumerate_sector(n, 1, 2).dimension,
          " k=2:", enumerate_sector(n, 2, 3).dimension)

# %% [markdown]
# With every qubit on resonance the one-excitation block has eigenvalues
# 0 (N-1 times) and +-sqrt(N) g.  Frequencies are stored in rad/ns.

# %%
n = 5
dev = DeviceConfig.homogeneous(n)
H = build_hamiltonian(dev, [QubitSetting.resonant()] * n, enumerate_sector(n, 1, 2))
g = 2 * np.pi * 13.5e-3
print(np.round(np.linalg.eigvalsh(H) / g, 6))

# %% [markdown]
# Parked qubits are dropped from the coupling by default.  Setting
# ``idle_decoupled=False`` keeps their (small) dispersive exchange with the
# resonator instead.

# %%
idle = [QubitSetting.idle()] + [QubitSetting.resonant()] * (n - 1)
for flag in (True, False):
    d = DeviceConfig.homogeneous(n, idle_decoupled=flag)
    H = build_hamiltonian(d, idle, enumerate_sector(n, 1, 2))
    print(f"idle_decoupled={flag}: coupling of Q1 to the resonator {H[0, 1]:.4f} rad/ns")
