"""Channel ledgers and the neighbor-borrowing cascade.

Each cell keeps a :class:`ChannelLedger`.  A cell whose own channels are all
busy borrows from adjacent cells: the two co-frequency neighbor sets are
searched, the set holding the single best donor first, taking as much as
possible from the best donor, then the next best in the same set, before
falling back to the other set.  A donor may lend only while
``busy_own + lent_out < threshold``.  Borrowed channels go back to their
donor as soon as the call using them ends.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Optional

from .errors import DomainError, StateError
from .topology import ClusterLayout, donor_search_order


@dataclass
class ChannelLedger:
    cell: int
    owned: int
    threshold: int
    busy_own: int = 0
    lent_out: dict[int, int] = field(default_factory=dict)
    borrowed_in: dict[int, int] = field(default_factory=dict)
    busy_borrowed_from: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.owned < 0 or self.threshold < 0:
            raise DomainError("owned and threshold must be >= 0")
        if self.threshold > self.owned:
            raise DomainError(f"threshold {self.threshold} exceeds owned channels {self.owned}")

    @property
    def total_lent(self) -> int:
        return sum(self.lent_out.values())

    @property
    def total_borrowed(self) -> int:
        return sum(self.borrowed_in.values())

    @property
    def busy_borrowed(self) -> int:
        return sum(self.busy_borrowed_from.values())

    @property
    def busy(self) -> int:
        return self.busy_own + self.busy_borrowed

    @property
    def free_owned(self) -> int:
        return self.owned - self.busy_own - self.total_lent

    def idle_borrowed_donor(self) -> Optional[int]:
        """Lowest-id donor with a borrowed channel not carrying a call."""
        for donor in sorted(self.borrowed_in):
            if self.borrowed_in[donor] > self.busy_borrowed_from.get(donor, 0):
                return donor
        return None

    def is_pristine(self) -> bool:
        return (self.busy_own == 0 and self.total_lent == 0 and self.total_borrowed == 0
                and self.busy_borrowed == 0)

    def check(self) -> None:
        counts = [self.busy_own, *self.lent_out.values(), *self.borrowed_in.values(),
                  *self.busy_borrowed_from.values()]
        if any(c < 0 for c in counts):
            raise StateError(f"cell {self.cell}: negative count in {self!r}")
        if self.busy_own + self.total_lent > self.owned:
            raise StateError(f"cell {self.cell}: busy_own + lent_out exceeds owned")
        for donor, n in self.busy_borrowed_from.items():
            if n > self.borrowed_in.get(donor, 0):
                raise StateError(f"cell {self.cell}: busy on donor {donor} exceeds borrowed")

    def copy(self) -> "ChannelLedger":
        return ChannelLedger(self.cell, self.owned, self.threshold, self.busy_own,
                             dict(self.lent_out), dict(self.borrowed_in), dict(self.busy_borrowed_from))


Ledgers = Mapping[int, ChannelLedger]


def make_ledgers(layout: ClusterLayout, channels_per_cell: int = 100, threshold: int = 70) -> dict[int, ChannelLedger]:
    return {cid: ChannelLedger(cid, channels_per_cell, threshold) for cid in layout.cell_ids}


def check_ledgers(ledgers: Ledgers) -> None:
    """Per-ledger invariants plus pairwise agreement of lent/borrowed maps."""
    for led in ledgers.values():
        led.check()
        for borrower, n in led.lent_out.items():
            if n and ledgers[borrower].borrowed_in.get(led.cell, 0) != n:
                raise StateError(f"cell {led.cell} lent {n} to {borrower}, which disagrees")
        for donor, n in led.borrowed_in.items():
            if n and ledgers[donor].lent_out.get(led.cell, 0) != n:
                raise StateError(f"cell {led.cell} borrowed {n} from {donor}, which disagrees")


@dataclass(frozen=True)
class BorrowRequest:
    reference: int
    n_req: int

    def __post_init__(self):
        if self.n_req < 1:
            raise DomainError("n_req must be >= 1")


@dataclass(frozen=True)
class BorrowOutcome:
    granted: tuple[tuple[int, int], ...]
    shortfall: int

    @property
    def total_granted(self) -> int:
        return sum(n for _, n in self.granted)


@dataclass(frozen=True)
class Assignment:
    """Channel held by one call: own channel when ``donor`` is None."""

    cell: int
    donor: Optional[int] = None

    @property
    def borrowed(self) -> bool:
        return self.donor is not None


def lendable_channels(ledger: ChannelLedger) -> int:
    return max(0, ledger.threshold - ledger.busy_own - ledger.total_lent)


def select_donor(candidates, ledgers: Ledgers) -> Optional[int]:
    """Candidate with the most lendable channels; lowest id on ties, None if all zero."""
    if not candidates:
        raise DomainError("empty candidate set")
    best, best_n = None, 0
    for cid in sorted(candidates):
        n = lendable_channels(ledgers[cid])
        if n > best_n:
            best, best_n = cid, n
    return best


@lru_cache(maxsize=64)
def _donor_sets(layout: ClusterLayout, cell: int) -> tuple[frozenset[int], ...]:
    return tuple(donor_search_order(layout, cell))


def _plan(request: BorrowRequest, layout: ClusterLayout, ledgers: Ledgers) -> list[tuple[int, int]]:
    sets = list(_donor_sets(layout, request.reference))
    if not sets:
        return []
    avail = {cid: lendable_channels(ledgers[cid]) for s in sets for cid in s}

    def best_of(s):
        return max(sorted(s), key=lambda c: avail[c])

    # the set whose best donor lends most goes first; ties by that donor's id
    sets.sort(key=lambda s: (-avail[best_of(s)], best_of(s)))
    need = request.n_req
    plan = []
    for s in sets:
        while need > 0:
            donor = best_of(s)
            if avail[donor] == 0:
                break
            take = min(need, avail[donor])
            plan.append((donor, take))
            avail[donor] -= take
            need -= take
    return plan


def execute_borrow(request: BorrowRequest, layout: ClusterLayout, ledgers: Ledgers) -> BorrowOutcome:
    """Borrow up to ``request.n_req`` channels for the reference cell.

    Granted channels are added to the reference ledger as idle borrowed
    channels.  Ledgers are validated first and left untouched on error.
    """
    check_ledgers(ledgers)
    plan = _plan(request, layout, ledgers)
    ref = ledgers[request.reference]
    for donor, n in plan:
        ledgers[donor].lent_out[ref.cell] = ledgers[donor].lent_out.get(ref.cell, 0) + n
        ref.borrowed_in[donor] = ref.borrowed_in.get(donor, 0) + n
    granted = sum(n for _, n in plan)
    return BorrowOutcome(tuple(plan), request.n_req - granted)


def return_idle(ledgers: Ledgers, cell: int) -> int:
    """Hand every idle borrowed channel of ``cell`` back to its donor."""
    led = ledgers[cell]
    returned = 0
    for donor in list(led.borrowed_in):
        idle = led.borrowed_in[donor] - led.busy_borrowed_from.get(donor, 0)
        if idle:
            _give_back(ledgers, cell, donor, idle)
            returned += idle
    return returned


def _give_back(ledgers: Ledgers, cell: int, donor: int, n: int) -> None:
    led, don = ledgers[cell], ledgers[donor]
    led.borrowed_in[donor] -= n
    don.lent_out[cell] -= n
    if not led.borrowed_in[donor]:
        del led.borrowed_in[donor]
    if not don.lent_out[cell]:
        del don.lent_out[cell]


def admit_call(cell: int, layout: ClusterLayout, ledgers: Ledgers, borrowing: bool = True) -> Optional[Assignment]:
    """Allocate one channel for a new call in ``cell``; None means blocked.

    Order of preference: idle own channel, idle borrowed channel, a channel
    borrowed now from a neighbor.  With ``borrowing=False`` only own channels
    are used.
    """
    led = ledgers[cell]
    if led.free_owned > 0:
        led.busy_own += 1
        return Assignment(cell)
    if not borrowing:
        return None
    donor = led.idle_borrowed_donor()
    if donor is None:
        outcome = execute_borrow(BorrowRequest(cell, 1), layout, ledgers)
        if not outcome.granted:
            return None
        donor = outcome.granted[0][0]
    led.busy_borrowed_from[donor] = led.busy_borrowed_from.get(donor, 0) + 1
    return Assignment(cell, donor)


def release_call(ledgers: Ledgers, assignment: Assignment) -> None:
    """Free the channel of a finished call; a borrowed channel returns to its donor."""
    led = ledgers[assignment.cell]
    if assignment.donor is None:
        if led.busy_own <= 0:
            raise StateError(f"cell {led.cell}: release of own channel with none busy")
        led.busy_own -= 1
        return
    donor = assignment.donor
    if led.busy_borrowed_from.get(donor, 0) <= 0:
        raise StateError(f"cell {led.cell}: release of channel from {donor} that is not held")
    led.busy_borrowed_from[donor] -= 1
    if not led.busy_borrowed_from[donor]:
        del led.busy_borrowed_from[donor]
    _give_back(ledgers, assignment.cell, donor, 1)
