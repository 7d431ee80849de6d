"""Event-driven simulation of Poisson call traffic over the cluster.

Every cell owns two random streams, one for inter-arrival gaps and one for
holding times, seeded from ``(seed, cell)``.  A call's holding time is drawn
when it arrives whether or not it is admitted, so runs that differ only in
``borrowing`` see exactly the same calls (common random numbers).
"""

from __future__ import annotations

import heapq
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .borrowing import admit_call, check_ledgers, make_ledgers, release_call
from .erlang import StateDistribution, overall_blocking_paper, overall_blocking_weighted, paper_metric_in_range
from .errors import ConfigurationError, InsufficientDataError, StateError
from .propagation import RadioEnvironment
from .topology import ClusterLayout, build_cluster

_ARRIVAL, _DEPARTURE = 0, 1
_CHUNK = 8192
MIN_EVENTS = 1000


@dataclass(frozen=True)
class TrafficProfile:
    arrival_rates: tuple[float, ...]
    mean_holding: float = 90.0

    def __post_init__(self):
        object.__setattr__(self, "arrival_rates", tuple(float(x) for x in self.arrival_rates))
        if any(x < 0 for x in self.arrival_rates):
            raise ConfigurationError("arrival rates must be >= 0")
        if not self.mean_holding > 0:
            raise ConfigurationError("mean_holding must be > 0")

    @property
    def loads(self) -> tuple[float, ...]:
        return tuple(x * self.mean_holding for x in self.arrival_rates)

    @classmethod
    def from_loads(cls, loads: Sequence[float], mean_holding: float = 90.0) -> "TrafficProfile":
        return cls(tuple(a / mean_holding for a in loads), mean_holding)


@dataclass(frozen=True)
class Scenario:
    layout: ClusterLayout
    traffic: TrafficProfile
    env: RadioEnvironment = field(default_factory=RadioEnvironment)
    threshold: int = 70
    borrowing: bool = True
    duration: float = 1e6
    warmup: float = 1e4
    seed: int = 0
    # ledger invariants checked every n-th event; 1 checks every transition
    check_every: int = 1000
    record_blocked: bool = False

    def __post_init__(self):
        if not self.duration > self.warmup >= 0:
            raise ConfigurationError(f"need duration > warmup >= 0, got {self.duration}, {self.warmup}")
        if len(self.traffic.arrival_rates) != self.layout.num_cells:
            raise ConfigurationError("one arrival rate per cell is required")
        if not 0 <= self.threshold <= self.channels_per_cell:
            raise ConfigurationError(f"threshold {self.threshold} not in [0, {self.channels_per_cell}]")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError("seed must be an unsigned 64-bit integer")

    @property
    def channels_per_cell(self) -> int:
        return self.layout.groups[0].channel_count

    @property
    def window(self) -> float:
        return self.duration - self.warmup


@dataclass(frozen=True)
class MetricsReport:
    offered: tuple[int, ...]
    admitted: tuple[int, ...]
    blocked: tuple[int, ...]
    blocking: tuple[float, ...]
    zero_sample: tuple[bool, ...]
    overall_blocking_paper: float
    paper_in_range: bool
    overall_blocking_weighted: float
    utilization: float
    borrow_events: int
    mean_borrowed: float
    window: float
    events: int
    blocked_calls: Optional[dict] = None

    @property
    def total_offered(self) -> int:
        return sum(self.offered)


class _Stream:
    """Buffered exponential variates from one generator."""

    __slots__ = ("_rng", "_scale", "_buf", "_i")

    def __init__(self, rng, scale):
        self._rng, self._scale = rng, scale
        self._buf, self._i = [], 0

    def next(self) -> float:
        if self._i == len(self._buf):
            self._buf = self._rng.exponential(self._scale, _CHUNK).tolist()
            self._i = 0
        x = self._buf[self._i]
        self._i += 1
        return x


def _streams(seed: int, cell: int, rate: float, mean_holding: float):
    arr = _Stream(np.random.default_rng([seed, cell, 0]), 1.0 / rate) if rate > 0 else None
    hold = _Stream(np.random.default_rng([seed, cell, 1]), mean_holding)
    return arr, hold


@dataclass
class _RunResult:
    report: MetricsReport
    occupancy_time: dict[int, np.ndarray]


def _simulate(sc: Scenario) -> _RunResult:
    layout = sc.layout
    cells = layout.cell_ids
    n_own = sc.channels_per_cell
    ledgers = make_ledgers(layout, n_own, sc.threshold)
    rates = dict(zip(cells, sc.traffic.arrival_rates))
    warmup, horizon = sc.warmup, sc.duration

    heap: list = []
    seq = 0
    arr_streams, hold_streams = {}, {}
    for c in cells:
        arr_streams[c], hold_streams[c] = _streams(sc.seed, c, rates[c], sc.traffic.mean_holding)
        if arr_streams[c] is not None:
            heapq.heappush(heap, (arr_streams[c].next(), seq, _ARRIVAL, c, None))
            seq += 1

    offered = dict.fromkeys(cells, 0)
    blocked = dict.fromkeys(cells, 0)
    arrival_index = dict.fromkeys(cells, 0)
    blocked_calls = {c: [] for c in cells} if sc.record_blocked else None
    busy = dict.fromkeys(cells, 0)
    occ_time = {c: np.zeros(n_own * (1 + len(cells)) + 1) for c in cells}
    occ_last = dict.fromkeys(cells, warmup)
    busy_total = borrowed_total = 0
    area_busy = area_borrowed = 0.0
    last_t = 0.0
    borrow_events = 0
    events = processed = 0
    check_every = sc.check_every
    borrowing = sc.borrowing

    def touch(c, t):
        lo = occ_last[c]
        if t > lo:
            occ_time[c][busy[c]] += t - lo
            occ_last[c] = t

    while heap and heap[0][0] <= horizon:
        t, _, kind, c, payload = heapq.heappop(heap)
        if t < last_t:
            raise StateError(f"event at t={t} processed after t={last_t}")
        if t > warmup:
            lo = last_t if last_t > warmup else warmup
            area_busy += busy_total * (t - lo)
            area_borrowed += borrowed_total * (t - lo)
        last_t = t
        in_window = t >= warmup

        if kind == _ARRIVAL:
            k = arrival_index[c]
            arrival_index[c] = k + 1
            heapq.heappush(heap, (t + arr_streams[c].next(), seq, _ARRIVAL, c, None))
            seq += 1
            hold = hold_streams[c].next()
            assignment = admit_call(c, layout, ledgers, borrowing)
            if in_window:
                offered[c] += 1
            if assignment is None:
                if in_window:
                    blocked[c] += 1
                    if blocked_calls is not None:
                        blocked_calls[c].append(k)
            else:
                if in_window:
                    touch(c, t)
                busy[c] += 1
                busy_total += 1
                if assignment.donor is not None:
                    borrowed_total += 1
                    if in_window:
                        borrow_events += 1
                heapq.heappush(heap, (t + hold, seq, _DEPARTURE, c, assignment))
                seq += 1
        else:
            release_call(ledgers, payload)
            if in_window:
                touch(c, t)
            busy[c] -= 1
            busy_total -= 1
            if payload.donor is not None:
                borrowed_total -= 1

        processed += 1
        if in_window:
            events += 1
        if check_every and processed % check_every == 0:
            check_ledgers(ledgers)

    lo = last_t if last_t > warmup else warmup
    area_busy += busy_total * (horizon - lo)
    area_borrowed += borrowed_total * (horizon - lo)
    for c in cells:
        touch(c, horizon)

    _drain(heap, ledgers)

    window = sc.window
    offered_t = tuple(offered[c] for c in cells)
    blocked_t = tuple(blocked[c] for c in cells)
    zero = tuple(o == 0 for o in offered_t)
    pb = tuple(b / o if o else 0.0 for b, o in zip(blocked_t, offered_t))
    lam = sc.traffic.arrival_rates
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        paper = overall_blocking_paper(lam, pb, [n_own] * len(cells))
    weighted = overall_blocking_weighted(lam, pb) if sum(lam) > 0 else 0.0
    report = MetricsReport(
        offered=offered_t,
        admitted=tuple(o - b for o, b in zip(offered_t, blocked_t)),
        blocked=blocked_t,
        blocking=pb,
        zero_sample=zero,
        overall_blocking_paper=paper,
        paper_in_range=paper_metric_in_range(paper),
        overall_blocking_weighted=weighted,
        utilization=area_busy / (window * n_own * len(cells)),
        borrow_events=borrow_events,
        mean_borrowed=area_borrowed / window,
        window=window,
        events=events,
        blocked_calls={c: tuple(v) for c, v in blocked_calls.items()} if blocked_calls is not None else None,
    )
    return _RunResult(report, occ_time)


def _drain(heap, ledgers) -> None:
    # release calls still in progress at the horizon, then require pristine ledgers
    for _, _, kind, _, payload in sorted(heap):
        if kind == _DEPARTURE:
            release_call(ledgers, payload)
    heap.clear()
    check_ledgers(ledgers)
    dirty = [c for c, led in ledgers.items() if not led.is_pristine()]
    if dirty:
        raise StateError(f"ledgers of cells {dirty} not pristine after draining")


def run_scenario(scenario: Scenario) -> MetricsReport:
    """Simulate one scenario; identical scenarios give identical reports."""
    return _simulate(scenario).report


def empirical_state_distribution(scenario: Scenario, cell: int) -> StateDistribution:
    """Time-weighted occupancy of ``cell`` over the measurement window."""
    if scenario.borrowing:
        raise ConfigurationError("occupancy of an M/M/N/N cell needs borrowing disabled")
    n = scenario.channels_per_cell
    if scenario.traffic.arrival_rates[cell - 1] == 0:
        p = np.zeros(n + 1)
        p[0] = 1.0
        return StateDistribution(p, n)
    result = _simulate(scenario)
    if result.report.events < MIN_EVENTS:
        raise InsufficientDataError(
            f"only {result.report.events} post-warmup events (need {MIN_EVENTS}); lengthen the run")
    occ = result.occupancy_time[cell]
    if occ[n + 1:].any():
        raise StateError(f"cell {cell} exceeded its {n} channels with borrowing disabled")
    p = occ[: n + 1] / occ.sum()
    return StateDistribution(p, n)


@dataclass(frozen=True)
class SweepPoint:
    arrival_rate: float
    without_borrowing: MetricsReport
    with_borrowing: MetricsReport


def _pair(sc: Scenario):
    return (run_scenario(replace(sc, borrowing=False)), run_scenario(replace(sc, borrowing=True)))


def sweep(base: Scenario, arrival_rates: Sequence[float], ref_cell: int = 1, workers: int = 1) -> list[SweepPoint]:
    """Paired runs without and with borrowing for each reference-cell rate.

    Other cells keep the rates of ``base``; both runs of a pair share the
    seed.  ``workers > 1`` runs pairs in separate processes.
    """
    rates = [float(x) for x in arrival_rates]
    if not rates:
        raise ConfigurationError("arrival_rates must be nonempty")
    if any(b <= a for a, b in zip(rates, rates[1:])):
        raise ConfigurationError("arrival_rates must be strictly increasing")
    scenarios = []
    for lam in rates:
        per_cell = list(base.traffic.arrival_rates)
        per_cell[ref_cell - 1] = lam
        scenarios.append(replace(base, traffic=replace(base.traffic, arrival_rates=tuple(per_cell))))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            pairs = list(pool.map(_pair, scenarios))
    else:
        pairs = [_pair(s) for s in scenarios]
    return [SweepPoint(lam, w, b) for lam, (w, b) in zip(rates, pairs)]


def hot_cell_scenario(ref_load: float, background_load: float = 40.0, *, mean_holding: float = 90.0,
                      channels_per_cell: int = 100, threshold: int = 70, cell_radius: float = 1000.0,
                      **kwargs) -> Scenario:
    """Cluster with cell 1 at ``ref_load`` Erlangs and the ring at ``background_load``."""
    layout = build_cluster(7, 3, cell_radius, channels_per_cell)
    loads = [ref_load] + [background_load] * (layout.num_cells - 1)
    return Scenario(layout, TrafficProfile.from_loads(loads, mean_holding), threshold=threshold, **kwargs)


def single_cell_scenario(load: float, *, mean_holding: float = 90.0, channels: int = 100, **kwargs) -> Scenario:
    """Only cell 1 carries traffic; the ring is idle."""
    return hot_cell_scenario(load, 0.0, mean_holding=mean_holding, channels_per_cell=channels,
                             threshold=kwargs.pop("threshold", min(70, channels)), **kwargs)
