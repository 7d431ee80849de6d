# %% [markdown]
# Downlink SINR on a borrowed channel
#
# Cell 1 serves a user on a channel borrowed from cell 2 (group B).  The user
# walks from the site toward cell 2.  Without management cell 2 keeps
# transmitting on that channel; with management the borrowed channel is only
# given to users in the inner part of cell 1 and cell 2 stays silent on it.

# %%
from dcbsim import RadioEnvironment, build_cluster, path_loss_db, sinr_profile

env = RadioEnvironment()  # 1800 MHz, 100 m mast, 1.5 kW, 1 km cells
layout = build_cluster()
print(f"path loss at 1 km: {path_loss_db(env, 1.0):.2f} dB, inner radius {env.inner_radius_m:.0f} m")

# %%
print("  r [m]   no mgmt   mgmt   (dB)")
for r, off, on in sinr_profile(env, layout, range(50, 1001, 50), group="B"):
    print(f"{r:7.0f} {off:9.2f} {'' if on is None else f'{on:7.2f}'}")

# %% Same walk on the cell's own channels (group A) for comparison
for r, off, _ in sinr_profile(env, layout, (100, 500, 1000), group="A"):
    print(f"own channel, r = {r:4.0f} m: {off:6.2f} dB")
