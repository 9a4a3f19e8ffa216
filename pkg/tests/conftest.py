import numpy as np
import pytest

from meshplan.ingest import write_matrix_csv, write_roster
from meshplan.synth import SynthConfig, synth_scenario


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def scenario_files(tmp_path_factory):
    """Default 155-node synthetic scenario written to disk once per session."""
    root = tmp_path_factory.mktemp("scenario")
    roster, raw = synth_scenario(SynthConfig(seed=7))
    write_roster(root / "roster.csv", roster)
    write_matrix_csv(root / "pathloss.csv", roster.ids, raw.values)
    return root / "roster.csv", root / "pathloss.csv"
