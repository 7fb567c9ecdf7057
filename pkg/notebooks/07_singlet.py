# %% [markdown]
# # The four-qubit singlet is trapped
#
# Two sqrt(iSWAP) gates and two pi/2 phase gates turn |1100> into the
# singlet.  On resonance nothing moves, whether the resonator is empty or
# holds a photon.

# %%
import numpy as np

from rads.config import paper_default
from rads.evolve import run
from rads.schedule import singlet_protocol
from rads.model import BasisConfig
from rads.states import fidelity, from_amplitudes, singlet4

device = paper_default()
for photon in (0, 1):
    traj = run(singlet_protocol(photon), device, store_states=True)
    prepared = traj.states[0]
    # singlet on Q1..Q4, ancilla in |0>, resonator holding `photon`
    target = from_amplitudes(prepared.space, {
        BasisConfig((0,) + c.qubit_bits, photon): a for c, a in singlet4().as_dict().items() if a != 0
    })
    print(f"photon={photon}: fidelity {fidelity(prepared, target):.12f}, "
          f"largest P1 variation {np.ptp(traj.p1, axis=0).max():.1e}")

# %% [markdown]
# Disorder in g and small crosstalk let some excitation through, but the
# exchange stays a small fraction of the two quanta.

# %%
for seed in range(5):
    noisy = device.with_disorder(5.0, 0.2, seed)
    traj = run(singlet_protocol(1, device=noisy), noisy)
    exc = traj.register_p1.sum(axis=1)
    print(f"seed {seed}: exchange {100 * np.abs(exc - exc[0]).max() / 2:.2f}% of two quanta")
