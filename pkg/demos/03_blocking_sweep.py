# %% [markdown]
# Simulated blocking and utilisation with and without borrowing
#
# Cell 1 is the hot cell; the six ring cells carry 40 Erlangs each.  Each
# load point is simulated twice with the same seed, once per policy.  A
# shorter horizon than the library default keeps this under a minute.

# %%
from dcbsim import hot_cell_scenario, sweep

MEAN_HOLDING = 90.0
loads = [60, 80, 100, 120, 140, 160, 200, 260]
base = hot_cell_scenario(loads[0], 40.0, duration=5e4, warmup=5e3, seed=1)
points = sweep(base, [a / MEAN_HOLDING for a in loads])

# %%
print(" load | blocking before  after | util before  after | mean borrowed")
for a, p in zip(loads, points):
    w, b = p.without_borrowing, p.with_borrowing
    print(f"{a:5d} | {w.overall_blocking_weighted:15.4f} {b.overall_blocking_weighted:6.4f} |"
          f" {w.utilization:11.4f} {b.utilization:6.4f} | {b.mean_borrowed:8.2f}")

# %% The cluster summary in its literal form, with rates in calls/s
for a, p in zip(loads, points):
    print(a, round(p.without_borrowing.overall_blocking_paper, 6), round(p.with_borrowing.overall_blocking_paper, 6))
