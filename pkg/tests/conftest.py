import numpy as np
import pytest

from nlslab import make_grid


@pytest.fixture
def grid1d():
    return make_grid(1, 32, 2 * np.pi)


@pytest.fixture
def grid2d():
    return make_grid(2, 32, 2 * np.pi)


@pytest.fixture
def grid3d():
    return make_grid(3, 16, 2 * np.pi)
