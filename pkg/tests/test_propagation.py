import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dcbsim.errors import DomainError
from dcbsim.propagation import (RadioEnvironment, dbm_sum, interferer_positions, mobile_antenna_correction,
                                path_loss_db, received_power_dbm, sinr_db, sinr_profile)
from dcbsim.topology import build_cluster

# direct evaluation with log10(1800) = 3.2552725051033065, h_m = 1.5 m, h_b = 100 m
A_HM_1800 = -0.062025474540701175
L_1KM = 127.12995420804319
TX_DBM = 61.76091259055681


@pytest.fixture(scope="module")
def env():
    return RadioEnvironment()


@pytest.fixture(scope="module")
def layout():
    return build_cluster()


def hata_reference(fc, hb, hm, d):
    # term by term, written independently of the library
    lf = math.log10(fc)
    a = 1.1 * (lf - 0.7) * hm - (1.56 * lf - 0.8)
    return 69.55 + 26.16 * lf - 13.82 * math.log10(hb) - a + (44.9 - 6.55 * math.log10(hb)) * math.log10(d)


def test_mobile_correction():
    assert mobile_antenna_correction(1800, 1.5) == pytest.approx(A_HM_1800, abs=1e-12)
    assert mobile_antenna_correction(10 ** 0.7, 7.3) == pytest.approx(-0.292, abs=1e-12)
    hs = np.linspace(1, 10, 10)
    vals = [mobile_antenna_correction(900, h) for h in hs]
    assert np.all(np.diff(vals) > 0)
    with pytest.raises(DomainError):
        mobile_antenna_correction(0, 1.5)
    with pytest.raises(DomainError):
        mobile_antenna_correction(900, -1)


def test_standard_correction_differs():
    lf = math.log10(900)
    assert mobile_antenna_correction(900, 1.5, "standard") == pytest.approx(
        (1.1 * lf - 0.7) * 1.5 - (1.56 * lf - 0.8))
    assert mobile_antenna_correction(900, 1.5, "standard") != mobile_antenna_correction(900, 1.5)


def test_path_loss_examples(env):
    assert path_loss_db(env, 1.0) == pytest.approx(L_1KM, abs=1e-9)
    assert path_loss_db(env, 1.0) == pytest.approx(127.13, abs=0.01)
    assert path_loss_db(env, 2.0) - path_loss_db(env, 1.0) == pytest.approx(31.8 * math.log10(2), abs=1e-9)
    d = np.linspace(0.05, 20, 200)
    assert np.all(np.diff(path_loss_db(env, d)) > 0)
    with pytest.raises(DomainError):
        path_loss_db(env, 0.0)


@pytest.mark.parametrize("fc", [900, 1800])
@pytest.mark.parametrize("hb", [30, 100])
def test_path_loss_grid(fc, hb):
    env = RadioEnvironment(carrier_mhz=fc, bs_height_m=hb)
    for d in np.linspace(0.1, 10, 25):
        assert path_loss_db(env, d) == pytest.approx(hata_reference(fc, hb, 1.5, d), abs=1e-9)


def test_received_power(env):
    assert env.tx_power_dbm == pytest.approx(TX_DBM, abs=1e-12)
    assert received_power_dbm(env, 1000.0) == pytest.approx(TX_DBM - L_1KM, abs=1e-9)
    assert received_power_dbm(env, 1000.0) == pytest.approx(-65.37, abs=0.01)
    assert received_power_dbm(env, 250.0) - received_power_dbm(env, 500.0) == pytest.approx(
        31.8 * math.log10(2), abs=1e-9)
    with pytest.raises(DomainError):
        received_power_dbm(env, -5.0)


def test_dbm_sum():
    assert dbm_sum([]) == -math.inf
    assert dbm_sum([0.0, 0.0]) == pytest.approx(10 * math.log10(2))
    assert dbm_sum([-math.inf, -100.0]) == pytest.approx(-100.0)


def test_env_validation():
    with pytest.raises(DomainError):
        RadioEnvironment(inner_radius_fraction=1.0)
    with pytest.raises(DomainError):
        RadioEnvironment(tx_power_w=0)
    with pytest.raises(DomainError):
        RadioEnvironment(correction="cost231")


def test_noise_only_sinr(env, layout):
    s = sinr_db(env, layout, 1000.0, "A", max_tier=0)
    assert s.interference_total == -math.inf
    assert s.sinr == pytest.approx(TX_DBM - L_1KM + 104.0, abs=1e-9)
    assert s.sinr == pytest.approx(38.63, abs=0.01)


@pytest.mark.parametrize("group", ["A", "B", "C"])
def test_sinr_decreasing(env, layout, group):
    radii = np.arange(10, 1001, 10)
    vals = [sinr_db(env, layout, r, group).sinr for r in radii]
    assert np.all(np.diff(vals) < 0)


@pytest.mark.parametrize("group", ["B", "C"])
def test_management_gain_for_borrowed_group(env, layout, group):
    for r in np.linspace(5, env.inner_radius_m, 40):
        off = sinr_db(env, layout, r, group, False)
        on = sinr_db(env, layout, r, group, True)
        assert on.sinr > off.sinr
        assert on.signal == off.signal


def test_management_neutral_for_own_group(env, layout):
    for r in (100.0, 500.0, 700.0):
        assert sinr_db(env, layout, r, "A", True).sinr == sinr_db(env, layout, r, "A", False).sinr


def test_sinr_domain(env, layout):
    with pytest.raises(DomainError):
        sinr_db(env, layout, 0.0)
    with pytest.raises(DomainError):
        sinr_db(env, layout, 1000.5)
    with pytest.raises(DomainError):
        sinr_db(env, layout, 800.0, "B", management=True)


def test_interferer_geometry(layout):
    pos, donor = interferer_positions(layout, 1, "B")
    assert donor == 0
    assert np.allclose(pos[0], layout.cell(2).position)
    assert len(pos) == 19
    # cells 4 and 6 reuse B and stay among the interferers
    for c in (4, 6):
        assert np.isclose(np.hypot(*(pos - layout.cell(c).position).T), 0).any()
    pos_a, donor_a = interferer_positions(layout, 1, "A")
    assert donor_a is None and len(pos_a) == 18


def test_profile_rows(env, layout):
    rows = sinr_profile(env, layout, [100.0, 700.0, 800.0], "B")
    assert rows[0][2] is not None and rows[1][2] is not None
    assert rows[2][2] is None


@settings(max_examples=50, deadline=None)
@given(perm_seed=st.integers(0, 2**32 - 1))
def test_interference_sum_order_independent(perm_seed):
    env, layout = RadioEnvironment(), build_cluster()
    pos, _ = interferer_positions(layout, 1, "A")
    user = np.array([350.0, 120.0])
    levels = received_power_dbm(env, np.hypot(*(pos - user).T))
    perm = np.random.default_rng(perm_seed).permutation(levels.size)
    assert abs(dbm_sum(levels) - dbm_sum(levels[perm])) <= 1e-12


def test_removing_interferer_never_hurts(env, layout):
    pos, _ = interferer_positions(layout, 1, "B")
    user = np.array([400.0, 0.0])
    levels = received_power_dbm(env, np.hypot(*(pos - user).T))
    base = dbm_sum(np.append(levels, env.noise_dbm))
    for k in range(levels.size):
        assert dbm_sum(np.append(np.delete(levels, k), env.noise_dbm)) <= base
