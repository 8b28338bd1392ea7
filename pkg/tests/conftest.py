import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dmnls.grid import GridSpec, band_limited_field, gaussian_field, make_grid


@pytest.fixture(scope="session")
def grid_small() -> GridSpec:
    """Unit mode spacing, cheap transforms; enough modes for every unit test."""
    return make_grid(2 * np.pi, 64)


@pytest.fixture(scope="session")
def grid_medium() -> GridSpec:
    """Box that comfortably holds a unit Gaussian at moderate cost."""
    return make_grid(8 * np.pi, 64)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(2024)


@pytest.fixture()
def random_field(grid_small, rng):
    return band_limited_field(grid_small, 5, rng)


@pytest.fixture()
def gaussian_medium(grid_medium):
    return gaussian_field(grid_medium)
