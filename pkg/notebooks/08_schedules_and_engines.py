# %% [markdown]
# # Schedule text and the two propagators
#
# Every protocol is an ordinary ``Schedule`` that renders to a small text
# format and parses back unchanged.

# %%
import numpy as np

from rads.config import paper_default
from rads.evolve import run
from rads.schedule import ScheduleError, parse_schedule, render, superradiance_protocol

text = render(superradiance_protocol(2))
print(text)
assert parse_schedule(text) == superradiance_protocol(2)

# %%
try:
    parse_schedule("qubits 2\nsegment -5ns resonant: 1 2\n")
except ScheduleError as exc:
    print("error:", exc)

# %% [markdown]
# The spectral engine diagonalises each segment.  The integrator takes fixed
# RK4 steps.  They share nothing but the Hamiltonian, so agreement is a real check.

# %%
sched = parse_schedule("""
qubits 3
excite q 1
segment 12.5ns resonant: 1 2 detuned 20MHz: 3
phase 2 0.7
segment 25ns resonant: 1 2 3
sample 0..37.5 step 0.25
""")
device = paper_default().with_disorder(5.0, 0.5, seed=7)
a = run(sched, device, engine="reference")
b = run(sched, device, engine="integrator")
print("max P1 difference:", np.abs(a.p1 - b.p1).max())
print("sum rule deviation:", np.abs(a.excitation - 1).max())
