import math

import numpy as np
import pytest

from meshplan.errors import ConfigError
from meshplan.synth import SynthConfig, free_space_reference_loss, mean_path_loss, synth_scenario


def test_reference_loss_925mhz():
    # 20 log10(4 pi f / c) at 1 m
    assert free_space_reference_loss(925e6) == pytest.approx(31.7706, abs=1e-4)


def test_scalar_loss_1km_full_foliage():
    cfg = SynthConfig(path_loss_exponent=3.0, foliage_db_per_m=0.18, foliage_fraction=1.0, shadowing_sigma_db=0)
    expected = 20 * math.log10(4 * math.pi * 925e6 / 299_792_458.0) + 30 * math.log10(1000) + 0.18 * 1000
    assert mean_path_loss(1000.0, cfg) == pytest.approx(expected, abs=1e-9)
    assert mean_path_loss(1000.0, cfg) == pytest.approx(301.77, abs=0.01)


def test_free_space_is_reciprocal():
    _, raw = synth_scenario(SynthConfig(n_nodes=30, path_loss_exponent=2, foliage_fraction=0,
                                        shadowing_sigma_db=0, seed=3))
    np.testing.assert_array_equal(raw.values, raw.values.T)


def test_shadowing_breaks_reciprocity():
    _, raw = synth_scenario(SynthConfig(n_nodes=30, seed=3))
    iu = np.triu_indices(30, 1)
    assert np.mean(np.abs(raw.values[iu] - raw.values.T[iu])) > 0.5


def test_same_seed_is_bit_identical():
    a = synth_scenario(SynthConfig(n_nodes=40, seed=11))
    b = synth_scenario(SynthConfig(n_nodes=40, seed=11))
    assert a[0] == b[0]
    assert a[1].values.tobytes() == b[1].values.tobytes()
    c = synth_scenario(SynthConfig(n_nodes=40, seed=12))
    assert not np.array_equal(a[1].values, c[1].values)


def test_loss_increases_with_distance():
    cfg = SynthConfig(shadowing_sigma_db=0)
    d = np.linspace(1, 15_000, 500)
    assert np.all(np.diff(mean_path_loss(d, cfg)) > 0)


def test_default_scenario_mixes_usable_and_unusable_links():
    _, raw = synth_scenario(SynthConfig())
    off = ~np.eye(155, dtype=bool)
    usable = raw.values[off] <= 143.79
    assert usable.any() and not usable.all()


def test_nodes_inside_region_and_separated():
    cfg = SynthConfig(n_nodes=50, width_m=20, height_m=20, shadowing_sigma_db=0, seed=1)
    roster, raw = synth_scenario(cfg)
    assert len(roster) == 50
    off = ~np.eye(50, dtype=bool)
    # separation >= 1 m means no loss below the 1 m reference
    assert np.all(raw.values[off] >= free_space_reference_loss(cfg.frequency_hz) - 1e-9)
    assert np.all(raw.values[off] <= mean_path_loss(np.hypot(20, 20), cfg) + 1e-9)


def test_too_crowded_region_is_rejected():
    with pytest.raises(ConfigError):
        synth_scenario(SynthConfig(n_nodes=50, width_m=1, height_m=1))


@pytest.mark.parametrize("kwargs", [
    {"n_nodes": 1}, {"width_m": 0}, {"frequency_hz": 0}, {"path_loss_exponent": 1.5},
    {"foliage_db_per_m": -1}, {"foliage_fraction": 1.5}, {"shadowing_sigma_db": -0.1},
])
def test_invalid_config(kwargs):
    with pytest.raises(ConfigError):
        SynthConfig(**kwargs)
