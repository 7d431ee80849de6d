"""Flat ``key = value`` configuration files.

Blank lines and ``#`` comments are ignored.  Every key is optional; the
defaults reproduce the reference parameter set where one is given.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional

from .errors import ConfigurationError
from .propagation import RadioEnvironment
from .simulator import Scenario, TrafficProfile
from .topology import build_cluster


class ConfigParseError(ConfigurationError):
    def __init__(self, message: str, line: Optional[int] = None, key: Optional[str] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line, self.key = line, key


@dataclass(frozen=True)
class Config:
    cells: int = 7
    channels_per_cell: int = 100
    reuse: int = 3
    threshold: int = 70
    lambda_ref: float = 100.0 / 90.0
    lambda_background: float = 40.0 / 90.0
    mean_holding_s: float = 90.0
    carrier_mhz: float = 1800.0
    bs_height_m: float = 100.0
    ms_height_m: float = 1.5
    tx_power_kw: float = 1.5
    noise_dbm: float = -104.0
    cell_radius_km: float = 1.0
    inner_radius_fraction: float = 0.7071
    duration_s: float = 1e6
    warmup_s: float = 1e4
    seed: int = 0
    hata_correction: str = "grouped"

    def validate(self) -> "Config":
        if self.cells != 7:
            raise ConfigurationError(f"cells={self.cells}: only 7 is supported")
        if self.reuse != 3:
            raise ConfigurationError(f"reuse={self.reuse}: only 3 is supported")
        if self.channels_per_cell < 1:
            raise ConfigurationError("channels_per_cell must be >= 1")
        if not 0 <= self.threshold <= self.channels_per_cell:
            raise ConfigurationError(
                f"threshold={self.threshold} must lie in [0, channels_per_cell={self.channels_per_cell}]")
        if not self.mean_holding_s > 0:
            raise ConfigurationError("mean_holding_s must be > 0")
        if self.lambda_ref < 0 or self.lambda_background < 0:
            raise ConfigurationError("arrival rates must be >= 0")
        if not self.duration_s > self.warmup_s >= 0:
            raise ConfigurationError("need duration_s > warmup_s >= 0")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError("seed must be an unsigned 64-bit integer")
        for name in ("carrier_mhz", "bs_height_m", "ms_height_m", "tx_power_kw", "cell_radius_km"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"{name} must be > 0")
        if not 0 < self.inner_radius_fraction < 1:
            raise ConfigurationError("inner_radius_fraction must lie in (0, 1)")
        if self.hata_correction not in ("grouped", "standard"):
            raise ConfigurationError("hata_correction must be 'grouped' or 'standard'")
        return self

    def layout(self):
        return build_cluster(self.cells, self.reuse, self.cell_radius_km * 1000.0, self.channels_per_cell)

    def environment(self) -> RadioEnvironment:
        return RadioEnvironment(
            carrier_mhz=self.carrier_mhz,
            bs_height_m=self.bs_height_m,
            ms_height_m=self.ms_height_m,
            tx_power_w=self.tx_power_kw * 1e3,
            noise_dbm=self.noise_dbm,
            cell_radius_m=self.cell_radius_km * 1000.0,
            inner_radius_fraction=self.inner_radius_fraction,
            correction=self.hata_correction,
        )

    def scenario(self, lambda_ref: Optional[float] = None, borrowing: bool = True) -> Scenario:
        lam = self.lambda_ref if lambda_ref is None else lambda_ref
        rates = (lam,) + (self.lambda_background,) * (self.cells - 1)
        return Scenario(
            layout=self.layout(),
            traffic=TrafficProfile(rates, self.mean_holding_s),
            env=self.environment(),
            threshold=self.threshold,
            borrowing=borrowing,
            duration=self.duration_s,
            warmup=self.warmup_s,
            seed=self.seed,
        )

    def with_values(self, values: dict[str, str]) -> "Config":
        """Copy with string-valued overrides converted to each key's type."""
        return replace(self, **{k: _convert(k, v) for k, v in values.items()})


_TYPES = {f.name: f.type for f in fields(Config)}


def _convert(key: str, raw: str, line: Optional[int] = None):
    if key not in _TYPES:
        raise ConfigParseError(f"unknown key (known: {', '.join(sorted(_TYPES))})", line, key)
    kind = _TYPES[key]
    raw = raw.strip()
    try:
        if kind == "int":
            value = int(raw, 0)
        elif kind == "float":
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError(raw)
        else:
            value = raw.strip("\"'")
    except ValueError:
        raise ConfigParseError(f"cannot read {raw!r} as {kind}", line, key) from None
    return value


def parse_config(text: str) -> Config:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigParseError("expected 'key = value'", lineno)
        key, raw = (s.strip() for s in body.split("=", 1))
        if key in values:
            raise ConfigParseError("duplicate key", lineno, key)
        values[key] = _convert(key, raw, lineno)
    return Config(**values)


def load_config(path=None, overrides: Optional[dict[str, str]] = None) -> Config:
    cfg = Config() if path is None else parse_config(Path(path).read_text())
    if overrides:
        cfg = cfg.with_values(overrides)
    return cfg.validate()
