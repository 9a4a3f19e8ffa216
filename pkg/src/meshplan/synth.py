"""Synthetic node layouts and directed path-loss matrices.

Stands in for ray-traced propagation output: log-distance loss from a
free-space 1 m reference, a linear foliage term, and independent
log-normal shadowing per direction (which makes the matrix non-reciprocal).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .ingest import NodeRecord, NodeRoster, RawPathLoss

SPEED_OF_LIGHT = 299_792_458.0
METERS_PER_DEG_LAT = 111_320.0
MIN_SEPARATION_M = 1.0


@dataclass(frozen=True)
class SynthConfig:
    n_nodes: int = 155
    width_m: float = 10_000.0
    height_m: float = 10_000.0
    frequency_hz: float = 925e6
    path_loss_exponent: float = 3.0
    foliage_db_per_m: float = 0.18
    foliage_fraction: float = 0.05
    shadowing_sigma_db: float = 2.0
    seed: int = 0
    # Origin of the local metric grid, used only to emit lat/lon in the roster.
    origin_lat: float = 13.44
    origin_lon: float = 144.79

    def __post_init__(self):
        if self.n_nodes < 2:
            raise ConfigError("n_nodes must be >= 2")
        if not (self.width_m > 0 and self.height_m > 0):
            raise ConfigError("region must have positive width and height")
        if self.frequency_hz <= 0:
            raise ConfigError("frequency_hz must be > 0")
        if self.path_loss_exponent < 2:
            raise ConfigError("path_loss_exponent must be >= 2")
        if self.foliage_db_per_m < 0:
            raise ConfigError("foliage_db_per_m must be >= 0")
        if not 0 <= self.foliage_fraction <= 1:
            raise ConfigError("foliage_fraction must be in [0, 1]")
        if self.shadowing_sigma_db < 0:
            raise ConfigError("shadowing_sigma_db must be >= 0")


def free_space_reference_loss(frequency_hz: float, d0_m: float = 1.0) -> float:
    """Friis loss in dB at distance ``d0_m``."""
    return 20.0 * math.log10(4.0 * math.pi * d0_m * frequency_hz / SPEED_OF_LIGHT)


def mean_path_loss(distance_m, cfg: SynthConfig):
    """Shadowing-free loss in dB; accepts scalars or arrays (distances >= 1 m)."""
    d = np.asarray(distance_m, dtype=float)
    pl = (free_space_reference_loss(cfg.frequency_hz)
          + 10.0 * cfg.path_loss_exponent * np.log10(d)
          + cfg.foliage_db_per_m * cfg.foliage_fraction * d)
    return pl if pl.ndim else float(pl)


def place_nodes(cfg: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    """Uniform positions in the region, redrawing any node closer than 1 m to an earlier one."""
    pos = np.empty((cfg.n_nodes, 2))
    for i in range(cfg.n_nodes):
        for _ in range(10_000):
            p = rng.uniform((0.0, 0.0), (cfg.width_m, cfg.height_m))
            if i == 0 or np.min(np.hypot(*(pos[:i] - p).T)) >= MIN_SEPARATION_M:
                break
        else:
            raise ConfigError("region too small to separate nodes by 1 m")
        pos[i] = p
    return pos


def synth_scenario(cfg: SynthConfig) -> tuple[NodeRoster, RawPathLoss]:
    rng = np.random.default_rng(cfg.seed)
    pos = place_nodes(cfg, rng)
    n = cfg.n_nodes

    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    np.fill_diagonal(dist, 1.0)
    pl = mean_path_loss(dist, cfg)
    if cfg.shadowing_sigma_db > 0:
        pl = pl + rng.normal(0.0, cfg.shadowing_sigma_db, size=(n, n))
    np.fill_diagonal(pl, 0.0)
    pl = np.maximum(pl, 0.0)

    width = len(str(n))
    lat_scale = METERS_PER_DEG_LAT
    lon_scale = METERS_PER_DEG_LAT * math.cos(math.radians(cfg.origin_lat))
    nodes = tuple(
        NodeRecord(
            id=f"N{i + 1:0{width}d}",
            latitude=round(cfg.origin_lat + y / lat_scale, 7),
            longitude=round(cfg.origin_lon + x / lon_scale, 7),
        )
        for i, (x, y) in enumerate(pos)
    )
    return NodeRoster(nodes), RawPathLoss(pl)
