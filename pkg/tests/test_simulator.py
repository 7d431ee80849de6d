from dataclasses import replace

import numpy as np
import pytest

from dcbsim.erlang import erlang_b_recursive, state_distribution
from dcbsim.errors import ConfigurationError, InsufficientDataError
from dcbsim.simulator import (Scenario, TrafficProfile, empirical_state_distribution, hot_cell_scenario,
                              run_scenario, single_cell_scenario, sweep)
from dcbsim.topology import build_cluster


def test_zero_traffic():
    sc = hot_cell_scenario(0.0, 0.0, duration=1e4, warmup=0.0)
    r = run_scenario(sc)
    assert r.total_offered == 0
    assert r.utilization == 0.0
    assert r.blocking == (0.0,) * 7 and all(r.zero_sample)
    assert r.overall_blocking_weighted == 0.0
    assert r.overall_blocking_paper == 1.0


def test_determinism():
    sc = hot_cell_scenario(150.0, duration=5e3, warmup=500.0, seed=42)
    assert run_scenario(sc) == run_scenario(sc)
    assert run_scenario(sc) != run_scenario(replace(sc, seed=43))


def test_report_invariants():
    r = run_scenario(hot_cell_scenario(180.0, duration=2e4, warmup=1e3, seed=1))
    for o, a, b, p in zip(r.offered, r.admitted, r.blocked, r.blocking):
        assert a + b == o
        assert 0.0 <= p <= 1.0
    assert 0.0 <= r.utilization <= 1.0
    assert r.borrow_events > 0 and r.mean_borrowed > 0


def test_debug_checks_every_event():
    sc = hot_cell_scenario(250.0, duration=3e3, warmup=100.0, seed=9, check_every=1)
    assert run_scenario(sc).borrow_events > 0


def test_single_cell_erlang_quick():
    # a short run; the long version lives in the acceptance suite
    sc = single_cell_scenario(100.0, borrowing=False, duration=1.5e5, warmup=5e3, seed=2)
    r = run_scenario(sc)
    assert abs(r.blocking[0] - erlang_b_recursive(100.0, 100)) <= 0.01


def test_little_law_utilization():
    # carried traffic / total channels, no borrowing
    sc = hot_cell_scenario(60.0, 40.0, duration=1e5, warmup=5e3, seed=4, borrowing=False)
    r = run_scenario(sc)
    expected = (60.0 + 6 * 40.0) / 700
    assert r.utilization == pytest.approx(expected, rel=0.02)


def test_state_distribution_quick():
    sc = single_cell_scenario(2.0, channels=5, borrowing=False, duration=3e6, warmup=1e3, seed=3)
    emp = empirical_state_distribution(sc, 1)
    assert emp.probabilities.sum() == pytest.approx(1.0, abs=1e-9)
    assert emp.total_variation(state_distribution(2.0, 5)) <= 0.02


def test_state_distribution_edge_cases():
    idle = single_cell_scenario(0.0, channels=5, borrowing=False, duration=1e4, warmup=0.0)
    assert empirical_state_distribution(idle, 1).probabilities[0] == 1.0
    short = single_cell_scenario(2.0, channels=5, borrowing=False, duration=2e3, warmup=0.0)
    with pytest.raises(InsufficientDataError):
        empirical_state_distribution(short, 1)
    with pytest.raises(ConfigurationError):
        empirical_state_distribution(replace(short, borrowing=True), 1)


def test_scenario_validation():
    layout = build_cluster()
    traffic = TrafficProfile((0.1,) * 7)
    with pytest.raises(ConfigurationError):
        Scenario(layout, traffic, duration=10.0, warmup=10.0)
    with pytest.raises(ConfigurationError):
        Scenario(layout, TrafficProfile((0.1,) * 6))
    with pytest.raises(ConfigurationError):
        Scenario(layout, traffic, threshold=101)
    with pytest.raises(ConfigurationError):
        TrafficProfile((0.1,) * 7, mean_holding=0.0)


def test_common_random_numbers_subset():
    sc = hot_cell_scenario(300.0, 40.0, duration=2e4, warmup=1e3, seed=5, record_blocked=True)
    without = run_scenario(replace(sc, borrowing=False))
    with_ = run_scenario(sc)
    assert without.offered == with_.offered
    blocked_without, blocked_with = set(without.blocked_calls[1]), set(with_.blocked_calls[1])
    assert blocked_with and blocked_with <= blocked_without


def test_sweep_single_point():
    base = hot_cell_scenario(100.0, duration=5e3, warmup=500.0, seed=1)
    pts = sweep(base, [1.5])
    assert len(pts) == 1
    p = pts[0]
    assert p.arrival_rate == 1.5
    assert p.without_borrowing == run_scenario(replace(base, borrowing=False, traffic=replace(
        base.traffic, arrival_rates=(1.5,) + base.traffic.arrival_rates[1:])))


def test_sweep_rejects_bad_rates():
    base = hot_cell_scenario(100.0, duration=5e3, warmup=500.0)
    with pytest.raises(ConfigurationError):
        sweep(base, [])
    with pytest.raises(ConfigurationError):
        sweep(base, [2.0, 1.0])


def test_sweep_parallel_matches_serial():
    base = hot_cell_scenario(100.0, duration=3e3, warmup=300.0, seed=8)
    assert sweep(base, [1.0, 2.0], workers=2) == sweep(base, [1.0, 2.0])
