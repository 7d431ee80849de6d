# %% [markdown]
# Walking through the borrowing cascade by hand
#
# Cell 1 has all 100 of its channels busy.  Its neighbours split into two
# co-frequency sets, {2, 4, 6} and {3, 5, 7}.  A donor may lend while its own
# busy channels plus those already lent stay below the threshold of 70.

# %%
from dcbsim import BorrowRequest, admit_call, build_cluster, execute_borrow, lendable_channels, make_ledgers
from dcbsim.borrowing import return_idle
from dcbsim.topology import donor_search_order

layout = build_cluster()
print("donor sets of cell 1:", [sorted(s) for s in donor_search_order(layout, 1)])

ledgers = make_ledgers(layout, channels_per_cell=100, threshold=70)
ledgers[1].busy_own = 100
for cell, busy in {2: 40, 4: 70, 6: 70, 3: 45, 5: 60, 7: 70}.items():
    ledgers[cell].busy_own = busy


def show():
    print("lendable:", {c: lendable_channels(ledgers[c]) for c in range(2, 8)})


show()

# %% Ask for 50 channels at once: cell 2 gives its 30, then cell 3 covers the remaining 20
outcome = execute_borrow(BorrowRequest(1, 50), layout, ledgers)
print("granted:", outcome.granted, "shortfall:", outcome.shortfall)
print("cell 1 now has", ledgers[1].owned + ledgers[1].total_borrowed, "channels")
show()

# %% Idle borrowed channels are used before anything new is borrowed
call = admit_call(1, layout, ledgers)
print("new call placed on a channel from cell", call.donor)

# %% Give the unused loans back
print("returned", return_idle(ledgers, 1), "idle channels")
show()
