# %% [markdown]
# # Collective Rabi frequency versus N
#
# The ancilla Q0 loads a photon into the resonator, the register absorbs it as
# a bright state, and the probe segment lets it swap back and forth.  The
# photon population oscillates at 2 sqrt(N) g.

# %%
from rads.analysis import fit_rabi, fit_scaling
from rads.config import paper_default
from rads.evolve import run
from rads.schedule import superradiance_protocol

device = paper_default()
ns = list(range(1, 11))
freqs = []
for n in ns:
    traj = run(superradiance_protocol(n), device)
    fit = fit_rabi(traj.times, traj.photon_p1)
    freqs.append(fit.frequency)
    print(f"N={n:2d}  f={fit.frequency:8.4f} MHz  photon range [{fit.minimum:.1e}, {fit.maximum:.6f}]")

# %%
scaling = fit_scaling(ns, freqs)
print(f"f = {scaling.prefactor:.4f} MHz * N^{scaling.exponent:.6f}")

# %% [markdown]
# With 5% random spread in the couplings the exponent moves only slightly,
# since the collective coupling is set by the root-mean-square g of the
# qubits in use.

# %%
noisy = device.with_disorder(5.0, 0.0, seed=1)
f_noisy = []
for n in ns:
    traj = run(superradiance_protocol(n, device=noisy), noisy)
    f_noisy.append(fit_rabi(traj.times, traj.photon_p1).frequency)
print(f"disordered exponent {fit_scaling(ns, f_noisy).exponent:.4f}")
