"""Maximum tolerable path loss from radio hardware parameters."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class LinkBudgetParams:
    tx_power_dbm: float = 30.00
    tx_gain_dbi: float = 6.00
    rx_gain_dbi: float = 6.00
    system_losses_db: float = -11.62  # signed: losses are entered as negative dB and added
    rx_sensitivity_dbm: float = -113.41
    link_margin_db: float = 0.0

    def __post_init__(self):
        if self.link_margin_db < 0:
            raise ConfigError("link_margin_db must be >= 0")
        if self.system_losses_db > 0:
            raise ConfigError("system_losses_db must be <= 0 (losses carry their sign)")
        if not self.rx_sensitivity_dbm < self.tx_power_dbm:
            raise ConfigError("rx_sensitivity_dbm must be below tx_power_dbm")


@dataclass(frozen=True)
class LinkBudgetResult:
    pl_max_db: float


def compute_pl_max(p: LinkBudgetParams) -> LinkBudgetResult:
    pl_max = (p.tx_power_dbm + p.tx_gain_dbi + p.rx_gain_dbi + p.system_losses_db
              - p.rx_sensitivity_dbm - p.link_margin_db)
    if not math.isfinite(pl_max):
        raise ConfigError("link budget inputs must be finite")
    return LinkBudgetResult(pl_max)


def is_usable(pl_db: float, r: LinkBudgetResult) -> bool:
    """True when the link closes; equality with the limit counts as usable."""
    if math.isinf(pl_db) or math.isnan(pl_db):
        return False
    return pl_db <= r.pl_max_db
