# %% [markdown]
# # A dark state absorbing a second photon
#
# A dark state cannot emit, but it can still absorb: with one photon in the
# resonator the pair couples to the two-excitation sector with strength
# g sqrt(N-2).

# %%
import numpy as np

from rads.analysis import fit_rabi
from rads.config import paper_default
from rads.evolve import run
from rads.model import BasisConfig, DeviceConfig, QubitSetting, build_hamiltonian, enumerate_sector
from rads.schedule import absorb_protocol
from rads.states import dark_state

device = paper_default()


def spread_frequency(n):
    """Oscillation frequency from the eigenvalues that |D,1> populates."""
    space = enumerate_sector(n, 2, 3)
    H = build_hamiltonian(DeviceConfig.homogeneous(n), [QubitSetting.resonant()] * n, space)
    psi = np.zeros(space.dimension, dtype=complex)
    for c, a in dark_state(n, 1).as_dict().items():
        if a != 0:
            psi[space.index_of(BasisConfig(c.qubit_bits, 1))] = a
    w, V = np.linalg.eigh(H)
    used = w[np.abs(V.conj().T @ psi) ** 2 > 1e-10]
    return (used.max() - used.min()) / (2 * np.pi) * 1e3


for n in range(3, 9):
    sched = absorb_protocol(n)
    traj = run(sched, device).window(sched.sample_times()[0], np.inf)
    f = fit_rabi(traj.times, traj.photon_p1).frequency
    print(f"N={n}: simulated {f:.4f} MHz, eigenvalue spread {spread_frequency(n):.4f}, "
          f"2 g sqrt(N-2) = {27 * np.sqrt(n - 2):.4f}")
