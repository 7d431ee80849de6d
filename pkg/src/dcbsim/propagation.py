"""Okumura-Hata path loss and downlink SINR for the reference cell.

Distances for the Hata formula are in km, frequencies in MHz, antenna
heights in m.  Everything else in this module works in meters and dBm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .topology import ClusterLayout, co_channel_interferers


@dataclass(frozen=True)
class RadioEnvironment:
    carrier_mhz: float = 1800.0
    bs_height_m: float = 100.0
    ms_height_m: float = 1.5
    tx_power_w: float = 1500.0
    noise_dbm: float = -104.0
    cell_radius_m: float = 1000.0
    inner_radius_fraction: float = 1.0 / math.sqrt(2.0)
    # "grouped": 1.1*(log f - 0.7)*h_m ; "standard": (1.1*log f - 0.7)*h_m
    correction: str = "grouped"

    def __post_init__(self):
        for name in ("carrier_mhz", "bs_height_m", "ms_height_m", "tx_power_w", "cell_radius_m"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be > 0")
        if not 0 < self.inner_radius_fraction < 1:
            raise DomainError("inner_radius_fraction must lie in (0, 1)")
        if self.correction not in ("grouped", "standard"):
            raise DomainError(f"unknown correction mode {self.correction!r}")

    @property
    def tx_power_dbm(self) -> float:
        return 10.0 * math.log10(self.tx_power_w * 1e3)

    @property
    def inner_radius_m(self) -> float:
        return self.inner_radius_fraction * self.cell_radius_m


def mobile_antenna_correction(carrier_mhz: float, ms_height_m: float, mode: str = "grouped") -> float:
    """Mobile antenna height correction ``a(h_m)`` in dB."""
    if not (carrier_mhz > 0 and ms_height_m > 0):
        raise DomainError("carrier frequency and mobile height must be > 0")
    lf = math.log10(carrier_mhz)
    if mode == "grouped":
        return 1.1 * (lf - 0.7) * ms_height_m - (1.56 * lf - 0.8)
    if mode == "standard":
        return (1.1 * lf - 0.7) * ms_height_m - (1.56 * lf - 0.8)
    raise DomainError(f"unknown correction mode {mode!r}")


def path_loss_db(env: RadioEnvironment, d_km):
    """Hata urban path loss at distance ``d_km`` (scalar or array)."""
    d = np.asarray(d_km, dtype=float)
    if (d <= 0).any():
        raise DomainError("distance must be > 0")
    lf, lh = math.log10(env.carrier_mhz), math.log10(env.bs_height_m)
    a_hm = mobile_antenna_correction(env.carrier_mhz, env.ms_height_m, env.correction)
    loss = 69.55 + 26.16 * lf - 13.82 * lh - a_hm + (44.9 - 6.55 * lh) * np.log10(d)
    return float(loss) if loss.ndim == 0 else loss


def received_power_dbm(env: RadioEnvironment, d_m):
    """Received level at ``d_m`` meters from a base station."""
    d = np.asarray(d_m, dtype=float)
    if (d <= 0).any():
        raise DomainError("distance must be > 0")
    return env.tx_power_dbm - path_loss_db(env, d / 1000.0)


def dbm_sum(levels_dbm) -> float:
    """Power sum of levels given in dBm; -inf for an empty input."""
    levels = np.asarray(levels_dbm, dtype=float)
    if levels.size == 0:
        return -math.inf
    peak = levels.max()
    if peak == -math.inf:
        return -math.inf
    return float(peak + 10.0 * np.log10(np.power(10.0, (levels - peak) / 10.0).sum()))


@dataclass(frozen=True)
class SinrSample:
    user_distance: float
    signal: float
    interference_total: float
    sinr: float
    management: bool
    noise: float


def _donor_for(layout: ClusterLayout, cell: int, group: str) -> int:
    for n in sorted(layout.neighbors(cell)):
        if layout.group_of(n) == group:
            return n
    raise DomainError(f"cell {cell} has no neighbor using group {group}")


def interferer_positions(layout: ClusterLayout, cell: int, group: str, max_tier: int = 2):
    """Transmitters reusing ``group`` as seen by ``cell`` plus the donor, if any.

    Returns ``(positions, donor_index)``.  For the serving cell's own group
    there is no donor and ``donor_index`` is None.  For a borrowed group the
    donor is the lowest-id neighbor on that group, and the remaining
    interferers are the donor's own co-channel rings.
    """
    if max_tier == 0:
        return np.empty((0, 2)), None
    if group == layout.group_of(cell):
        return co_channel_interferers(layout, cell, group, max_tier).positions(), None
    donor = _donor_for(layout, cell, group)
    rings = co_channel_interferers(layout, donor, group, max_tier).positions()
    positions = np.vstack([np.asarray(layout.cell(donor).position, dtype=float)[None, :], rings])
    return positions, 0


def sinr_db(env: RadioEnvironment, layout: ClusterLayout, r: float, group=None,
            management: bool = False, cell: int = 1, max_tier: int = 2) -> SinrSample:
    """Downlink SINR of a user ``r`` meters from the center of ``cell``.

    The user sits on the line toward the nearest co-channel transmitter (the
    worst case).  With ``management`` on, the user must be in the inner part
    of the cell and the donor does not transmit on the lent channel.
    """
    if not 0 < r <= env.cell_radius_m:
        raise DomainError(f"r={r} m outside (0, {env.cell_radius_m}] m")
    if management and r > env.inner_radius_m + 1e-9:
        raise DomainError(f"r={r} m beyond inner radius {env.inner_radius_m:.6g} m")
    group = group or layout.group_of(cell)
    center = np.asarray(layout.cell(cell).position, dtype=float)
    positions, donor_idx = interferer_positions(layout, cell, group, max_tier)

    if len(positions):
        rel = positions - center
        k = int(np.argmin(np.hypot(rel[:, 0], rel[:, 1])))
        azimuth = math.atan2(rel[k, 1], rel[k, 0])
    else:
        azimuth = 0.0
    user = center + r * np.array([math.cos(azimuth), math.sin(azimuth)])

    if management and donor_idx is not None:
        positions = np.delete(positions, donor_idx, axis=0)
    signal = float(received_power_dbm(env, r))
    if len(positions):
        dist = np.hypot(*(positions - user).T)
        interference = dbm_sum(received_power_dbm(env, dist))
    else:
        interference = -math.inf
    impairment = dbm_sum([interference, env.noise_dbm])
    return SinrSample(float(r), signal, interference, signal - impairment, bool(management), env.noise_dbm)


def sinr_profile(env: RadioEnvironment, layout: ClusterLayout, radii, group=None, cell: int = 1):
    """Rows ``(r, sinr_off, sinr_on)``; ``sinr_on`` is None beyond the inner radius."""
    rows = []
    for r in radii:
        off = sinr_db(env, layout, r, group, False, cell).sinr
        on = sinr_db(env, layout, r, group, True, cell).sinr if r <= env.inner_radius_m + 1e-9 else None
        rows.append((float(r), off, on))
    return rows
