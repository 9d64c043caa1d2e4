import numpy as np
import pytest

from gibbslab import Fov, make_grid


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def unit_grid_555():
    return make_grid(Fov.cube(0.0, 1.0), (5, 5, 5))
