# %% [markdown]
# # Storing in a dark state, then releasing
#
# The excitation is parked in the m=1 dark state for t_store, then phase gates
# turn it into the bright state and the swap oscillation starts.

# %%
import numpy as np

from rads.analysis import fit_rabi
from rads.config import paper_default
from rads.evolve import run
from rads.schedule import preparation_time, switch_protocol, switch_time

device = paper_default()
for n in range(2, 9):
    traj = run(switch_protocol(n, 100.0), device)
    t_sw = switch_time(n, 100.0, device)
    before = traj.window(preparation_time(n), t_sw - 1e-6)
    after = traj.window(t_sw, np.inf)
    fit = fit_rabi(after.times, after.photon_p1)
    print(f"N={n}: switch at {t_sw:7.3f} ns, photon before {before.photon_mean.max():.1e}, "
          f"after f={fit.frequency:.4f} MHz (2 sqrt(N) g = {27 * np.sqrt(n):.4f}), "
          f"swing {fit.peak_to_peak:.6f}")
