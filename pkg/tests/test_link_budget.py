import math

import pytest
from hypothesis import given, strategies as st

from meshplan.errors import ConfigError
from meshplan.link_budget import LinkBudgetParams, LinkBudgetResult, compute_pl_max, is_usable


@pytest.mark.parametrize("args, expected", [
    ((30.00, 6.00, 6.00, -11.62, -113.41, 0), 143.79),
    ((0, 0, 0, 0, -100, 0), 100.0),
    ((30.00, 6.00, 6.00, -11.62, -113.41, 10), 133.79),
])
def test_pl_max(args, expected):
    assert compute_pl_max(LinkBudgetParams(*args)).pl_max_db == pytest.approx(expected, abs=0.005)


def test_defaults_are_the_reference_radio():
    assert compute_pl_max(LinkBudgetParams()).pl_max_db == pytest.approx(143.79, abs=0.005)


@pytest.mark.parametrize("kwargs", [
    {"link_margin_db": -1}, {"system_losses_db": 2.0}, {"rx_sensitivity_dbm": 31.0},
])
def test_invalid_params(kwargs):
    with pytest.raises(ConfigError):
        LinkBudgetParams(**kwargs)


@given(st.sampled_from(["tx_power_dbm", "tx_gain_dbi", "rx_gain_dbi", "link_margin_db"]),
       st.floats(0, 50))
def test_pl_max_moves_linearly(name, delta):
    base = LinkBudgetParams()
    shifted = LinkBudgetParams(**{**base.__dict__, name: getattr(base, name) + delta})
    change = compute_pl_max(shifted).pl_max_db - compute_pl_max(base).pl_max_db
    sign = -1 if name == "link_margin_db" else 1
    assert change == pytest.approx(sign * delta, abs=1e-9)


def test_is_usable_boundary():
    r = LinkBudgetResult(143.79)
    assert is_usable(143.79, r)
    assert not is_usable(143.80, r)
    assert not is_usable(math.inf, r)
    assert is_usable(0.0, r)
