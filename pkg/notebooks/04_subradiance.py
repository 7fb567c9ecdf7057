# %% [markdown]
# # Dark states stay dark
#
# Same preparation as the bright state, but the phase gates imprint a spin
# wave with m != 0.  The resonator never picks the excitation back up and each
# qubit keeps a population of exactly 1/N.

# %%
import numpy as np

from rads.analysis import fit_rabi
from rads.config import paper_default
from rads.evolve import run
from rads.schedule import preparation_time, subradiance_protocol

device = paper_default()
for n in (2, 4, 8):
    for m in range(1, n):
        traj = run(subradiance_protocol(n, m), device)
        probe = traj.window(preparation_time(n), np.inf)
        print(f"N={n} m={m}: max photon {probe.photon_mean.max():.1e}, "
              f"max |P1-1/N| {np.abs(probe.register_p1 - 1 / n).max():.1e}, "
              f"{fit_rabi(probe.times, probe.photon_p1)}")

# %% [markdown]
# Coupling disorder breaks the exact cancellation, so a little light leaks out.

# %%
noisy = device.with_disorder(5.0, 0.2, seed=3)
traj = run(subradiance_protocol(4, 1, device=noisy), noisy)
print(f"disordered N=4: max photon {traj.photon_mean.max():.3e}")
