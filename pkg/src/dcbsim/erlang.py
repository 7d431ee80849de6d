"""M/M/N/N loss-system formulas.

Stationary occupancy, Erlang-B blocking, and the two cluster-wide blocking
summaries used in the reports.  Terms ``a**i / i!`` are handled in log space
so that large loads and channel counts never overflow.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DomainError, StateError


@dataclass(frozen=True)
class OfferedLoad:
    """Poisson arrivals at ``arrival_rate`` with exponential holding of rate ``service_rate``."""

    arrival_rate: float
    service_rate: float

    def __post_init__(self):
        if not self.service_rate > 0:
            raise DomainError(f"service_rate must be > 0, got {self.service_rate}")
        if self.arrival_rate < 0:
            raise DomainError(f"arrival_rate must be >= 0, got {self.arrival_rate}")

    @property
    def erlangs(self) -> float:
        return self.arrival_rate / self.service_rate

    @classmethod
    def from_holding_time(cls, arrival_rate: float, mean_holding: float) -> "OfferedLoad":
        if not mean_holding > 0:
            raise DomainError(f"mean holding time must be > 0, got {mean_holding}")
        return cls(arrival_rate, 1.0 / mean_holding)


LoadLike = Union[OfferedLoad, float]


def _erlangs(load: LoadLike) -> float:
    a = load.erlangs if isinstance(load, OfferedLoad) else float(load)
    if a < 0 or math.isnan(a):
        raise DomainError(f"offered load must be >= 0, got {a}")
    return a


def _check_n(n) -> int:
    if int(n) != n or n < 0:
        raise DomainError(f"channel count must be a nonnegative integer, got {n}")
    return int(n)


@dataclass(frozen=True)
class StateDistribution:
    probabilities: np.ndarray
    capacity: int

    def __getitem__(self, i):
        return self.probabilities[i]

    def __len__(self):
        return len(self.probabilities)

    def mean(self) -> float:
        return float(np.dot(np.arange(self.capacity + 1), self.probabilities))

    def total_variation(self, other: "StateDistribution") -> float:
        if other.capacity != self.capacity:
            raise DomainError("distributions have different capacities")
        return 0.5 * float(np.abs(self.probabilities - other.probabilities).sum())


def _log_terms(a: float, n: int) -> np.ndarray:
    i = np.arange(n + 1)
    if a == 0:
        out = np.full(n + 1, -np.inf)
        out[0] = 0.0
        return out
    # log(a**i / i!) accumulated term by term
    steps = np.log(a) - np.log(np.maximum(i, 1))
    steps[0] = 0.0
    return np.cumsum(steps)


def state_distribution(load: LoadLike, n: int) -> StateDistribution:
    """Stationary occupancy ``P(i) = (a**i / i!) P(0)`` for ``i = 0..n``."""
    a = _erlangs(load)
    n = _check_n(n)
    logt = _log_terms(a, n)
    p = np.exp(logt - logt.max())
    p /= p.sum()
    return StateDistribution(p, n)


def erlang_b(load: LoadLike, n: int) -> float:
    """Blocking probability ``P(N)`` of an M/M/N/N system (closed form).

    Evaluates ``(a**N / N!) P(0)`` through the normalized occupancy vector.
    """
    a = _erlangs(load)
    n = _check_n(n)
    if n == 0:
        return 1.0 if a > 0 else 0.0
    return float(state_distribution(a, n).probabilities[-1])


def erlang_b_recursive(load: LoadLike, n: int) -> float:
    """Erlang-B by ``B(k) = a B(k-1) / (k + a B(k-1))``, ``B(0) = 1``."""
    a = _erlangs(load)
    n = _check_n(n)
    if n == 0:
        return 1.0 if a > 0 else 0.0
    b = 1.0
    for k in range(1, n + 1):
        b = a * b / (k + a * b)
    return b


def erlang_b_curve(load: LoadLike, n_max: int) -> np.ndarray:
    """Closed-form blocking for every capacity ``0..n_max`` at one load.

    Entry ``N`` equals ``erlang_b(load, N)``; computed in one pass with a
    running log-sum of the unnormalized occupancy terms.
    """
    a = _erlangs(load)
    n_max = _check_n(n_max)
    if a == 0:
        return np.zeros(n_max + 1)
    logt = _log_terms(a, n_max)
    out = np.exp(logt - np.logaddexp.accumulate(logt))
    out[0] = 1.0
    return out


def overall_blocking_paper(arrival_rates: Sequence[float], blocking: Sequence[float],
                           capacities: Sequence[float]) -> float:
    """Cluster blocking as ``1 - sum(lam*(1-B)) / (M * sum(N))``.

    The expression mixes call rates with channel counts, so the result is not
    guaranteed to lie in [0, 1].  An out-of-range value is returned unchanged
    and a ``RuntimeWarning`` is issued; see :func:`paper_metric_in_range`.
    """
    lam = np.asarray(arrival_rates, dtype=float)
    pb = np.asarray(blocking, dtype=float)
    caps = np.asarray(capacities, dtype=float)
    if lam.size == 0:
        raise DomainError("empty input")
    if not (lam.shape == pb.shape == caps.shape):
        raise DomainError("arrival_rates, blocking and capacities must have equal lengths")
    if (lam < 0).any() or (caps < 0).any():
        raise DomainError("arrival rates and capacities must be nonnegative")
    if ((pb < 0) | (pb > 1)).any():
        raise DomainError("blocking probabilities must lie in [0, 1]")
    total_cap = caps.sum()
    if total_cap == 0:
        raise DomainError("total capacity is zero")
    value = float(1.0 - (lam * (1.0 - pb)).sum() / (lam.size * total_cap))
    if not paper_metric_in_range(value):
        warnings.warn(f"overall blocking (unweighted form) = {value:g} lies outside [0, 1]",
                      RuntimeWarning, stacklevel=2)
    return value


def paper_metric_in_range(value: float) -> bool:
    return 0.0 <= value <= 1.0


def overall_blocking_weighted(arrival_rates: Sequence[float], blocking: Sequence[float]) -> float:
    """Offered-traffic weighted blocking ``sum(lam*B) / sum(lam)``."""
    lam = np.asarray(arrival_rates, dtype=float)
    pb = np.asarray(blocking, dtype=float)
    if lam.shape != pb.shape:
        raise DomainError("arrival_rates and blocking must have equal lengths")
    total = lam.sum()
    if not total > 0:
        raise DomainError("total arrival rate must be > 0")
    return float(np.clip((lam * pb).sum() / total, 0.0, 1.0))


def adjusted_capacities(base: Sequence[int], transfers: Iterable[tuple[int, int, int]]) -> list[int]:
    """Per-cell capacities after moving channels from donors to borrowers.

    ``base`` is indexed by cell id starting at 1; each transfer is
    ``(donor, borrower, count)``.
    """
    caps = [int(c) for c in base]
    if any(c < 0 for c in caps):
        raise DomainError("capacities must be nonnegative")
    for donor, borrower, count in transfers:
        for cid in (donor, borrower):
            if not 1 <= cid <= len(caps):
                raise DomainError(f"cell {cid} out of range 1..{len(caps)}")
        if count < 0:
            raise DomainError("transfer count must be nonnegative")
        caps[donor - 1] -= count
        caps[borrower - 1] += count
    if any(c < 0 for c in caps):
        raise StateError(f"donor capacity underflow: {caps}")
    return caps
