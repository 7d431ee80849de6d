# %% [markdown]
# Erlang-B for one cell, and what borrowing does to a cell's capacity
#
# A cell with N channels and Poisson traffic of a Erlangs is an M/M/N/N loss
# system.  This script tabulates its blocking and occupancy, then shows the
# capacity bookkeeping when a hot cell takes channels from two neighbours.

# %%
import numpy as np

from dcbsim import adjusted_capacities, erlang_b, erlang_b_recursive, state_distribution

# %% Blocking over load for the default 100-channel cell
print(" load  B(a, 100)")
for a in (60, 80, 90, 100, 110, 120, 140, 160):
    print(f"{a:5d}  {erlang_b(a, 100):.6f}")

# %% The closed form and the recursion agree to rounding
worst = max(abs(erlang_b(a, n) - erlang_b_recursive(a, n)) for a in (1, 50, 100, 200) for n in (1, 100, 200))
print("max disagreement:", worst)

# %% Occupancy of a small cell: P(i) for N = 5, a = 2
p = state_distribution(2.0, 5)
print(np.round(p.probabilities, 4), "mean busy:", round(p.mean(), 4))

# %% Cell 1 borrows 30 channels each from cells 2 and 3
caps = adjusted_capacities([100, 100, 100], [(2, 1, 30), (3, 1, 30)])
print("capacities after borrowing:", caps, "total:", sum(caps))
for label, n, a in (("cell 1", caps[0], 140), ("cell 2", caps[1], 40), ("cell 3", caps[2], 40)):
    print(f"{label}: N={n:3d}, a={a:3d} E -> B = {erlang_b(a, n):.2e}   (N=100: {erlang_b(a, 100):.2e})")
