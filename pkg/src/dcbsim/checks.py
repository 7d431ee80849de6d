"""Fast self-checks behind ``dcbsim validate``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .borrowing import Assignment, admit_call, check_ledgers, lendable_channels, make_ledgers, release_call
from .erlang import erlang_b_curve
from .errors import StateError
from .propagation import RadioEnvironment, path_loss_db
from .topology import ClusterLayout


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: measured={self.measured:.3e} tolerance={self.tolerance:.0e}"


def group_channel_totals(layout: ClusterLayout, ledgers) -> dict[str, int]:
    """Channels of each group, counted at home (not lent) plus on loan elsewhere."""
    totals = dict.fromkeys(sorted({c.group for c in layout.cells}), 0)
    for cid, led in ledgers.items():
        totals[layout.group_of(cid)] += led.owned - led.total_lent
        for donor, n in led.borrowed_in.items():
            totals[layout.group_of(donor)] += n
    return totals


def conservation_fuzz(layout: ClusterLayout, n_events: int, seed: int = 0, channels: int = 100,
                      threshold: int = 70, hot_cell: int = 1, admit_prob: float = 0.6) -> dict:
    """Random admit/release traffic with every invariant checked after each event.

    Half of the admissions target ``hot_cell`` so that borrowing is
    exercised.  Raises :class:`StateError` on the first violation; returns
    counters describing the run.
    """
    rng = np.random.default_rng(seed)
    ledgers = make_ledgers(layout, channels, threshold)
    expected = group_channel_totals(layout, ledgers)
    cells = layout.cell_ids
    active: list[Assignment] = []
    stats = {"admitted": 0, "blocked": 0, "borrowed": 0, "released": 0, "max_lent": 0}

    for _ in range(n_events):
        if not active or rng.random() < admit_prob:
            cell = hot_cell if rng.random() < 0.5 else int(cells[rng.integers(len(cells))])
            a = admit_call(cell, layout, ledgers)
            if a is None:
                stats["blocked"] += 1
            else:
                active.append(a)
                stats["admitted"] += 1
                stats["borrowed"] += a.borrowed
        else:
            k = int(rng.integers(len(active)))
            active[k], active[-1] = active[-1], active[k]
            release_call(ledgers, active.pop())
            stats["released"] += 1

        check_ledgers(ledgers)
        if group_channel_totals(layout, ledgers) != expected:
            raise StateError("per-group channel totals changed")
        lent = sum(led.total_lent for led in ledgers.values())
        if lent != sum(led.total_borrowed for led in ledgers.values()):
            raise StateError("systemwide lent_out != borrowed_in")
        if any(lendable_channels(led) < 0 for led in ledgers.values()):
            raise StateError("negative lendable count")
        stats["max_lent"] = max(stats["max_lent"], lent)

    while active:
        release_call(ledgers, active.pop())
    if not all(led.is_pristine() for led in ledgers.values()):
        raise StateError("ledgers not pristine after draining")
    return stats


def check_erlang(n_max: int = 200) -> CheckResult:
    loads = [0.5] + list(range(1, n_max + 1))
    worst = 0.0
    for a in loads:
        curve = erlang_b_curve(a, n_max)
        b = 1.0
        for n in range(1, n_max + 1):
            b = a * b / (n + a * b)
            worst = max(worst, abs(curve[n] - b))
    return CheckResult("erlang_b closed form vs recursion", worst <= 1e-10, worst, 1e-10)


def check_path_loss() -> list[CheckResult]:
    env = RadioEnvironment()
    golden = abs(path_loss_db(env, 1.0) - 127.13)
    slope = abs((path_loss_db(env, 10.0) - path_loss_db(env, 1.0)) - 31.8)
    return [
        CheckResult("path loss at 1 km (default environment) = 127.13 dB", golden <= 0.01, golden, 1e-2),
        CheckResult("path loss slope = 31.8 dB/decade", slope <= 1e-9, slope, 1e-9),
    ]


def check_conservation(layout: ClusterLayout, channels: int, threshold: int, seed: int,
                       n_events: int = 20_000) -> CheckResult:
    try:
        stats = conservation_fuzz(layout, n_events, seed, channels, threshold)
        ok = stats["borrowed"] > 0 or threshold == 0
        return CheckResult(f"channel conservation fuzz ({n_events} events)", ok, 0.0, 0.0)
    except StateError:
        return CheckResult(f"channel conservation fuzz ({n_events} events)", False, math.inf, 0.0)


def run_all(cfg) -> list[CheckResult]:
    return [check_erlang(), *check_path_loss(),
            check_conservation(cfg.layout(), cfg.channels_per_cell, cfg.threshold, cfg.seed)]

