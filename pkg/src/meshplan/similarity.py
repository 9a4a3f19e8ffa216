"""Exponential path-loss kernel producing the weighted adjacency matrix."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError, NumericalError
from .ingest import PathLossMatrix


@dataclass(frozen=True)
class KernelParams:
    """Targets for the decay rate.

    Only the ratio ``sim_lo / sim_hi`` is pinned by ``alpha``: the kernel has
    no offset, so ``S(pl_min)`` is generally not ``sim_lo`` itself.
    """

    pl_max_db: float
    pl_min_db: float
    sim_lo: float = 0.9
    sim_hi: float = 0.01

    def __post_init__(self):
        if not 0 < self.sim_hi < self.sim_lo < 1:
            raise ConfigError("kernel targets must satisfy 0 < sim_hi < sim_lo < 1")
        if self.pl_min_db == self.pl_max_db:
            raise ConfigError("degenerate path-loss range: pl_min_db == pl_max_db")
        if not 0 < self.pl_min_db < self.pl_max_db:
            raise ConfigError("kernel range must satisfy 0 < pl_min_db < pl_max_db")


@dataclass(frozen=True)
class SimilarityMatrix:
    values: np.ndarray
    alpha: float

    @property
    def n(self) -> int:
        return self.values.shape[0]


def compute_alpha(k: KernelParams) -> float:
    return math.log(k.sim_lo / k.sim_hi) / (k.pl_max_db - k.pl_min_db)


def min_positive_loss(pl: PathLossMatrix) -> float:
    """Smallest finite off-diagonal loss above 0 dB; the default kernel floor."""
    v = pl.values
    off = ~np.eye(pl.n, dtype=bool)
    candidates = v[off & np.isfinite(v) & (v > 0)]
    if candidates.size == 0:
        raise NumericalError("no finite positive off-diagonal path loss to anchor the kernel")
    return float(candidates.min())


def kernel_params_for(pl: PathLossMatrix, pl_max_db: float, sim_lo: float = 0.9,
                      sim_hi: float = 0.01, pl_min_db: Optional[float] = None) -> KernelParams:
    if pl_min_db is None:
        pl_min_db = min_positive_loss(pl)
        if pl_min_db >= pl_max_db:
            raise NumericalError(
                f"no usable links: smallest path loss {pl_min_db:.2f} dB is not below PL_max {pl_max_db:.2f} dB")
    return KernelParams(pl_max_db=pl_max_db, pl_min_db=pl_min_db, sim_lo=sim_lo, sim_hi=sim_hi)


def build_similarity(pl: PathLossMatrix, k: KernelParams) -> SimilarityMatrix:
    """exp(-alpha * PL) on usable links, exactly 0 on unusable or missing links and the diagonal."""
    alpha = compute_alpha(k)
    v = pl.values
    usable = np.isfinite(v) & (v <= k.pl_max_db)
    np.fill_diagonal(usable, False)
    s = np.zeros_like(v, dtype=float)
    s[usable] = np.exp(-alpha * v[usable])
    return SimilarityMatrix(s, alpha)
