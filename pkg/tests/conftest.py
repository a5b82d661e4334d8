import math

import pytest

from bfamlab.data import build_phi
from bfamlab.grid import make_grid
from bfamlab.lp import build_cutoffs


@pytest.fixture(scope="session")
def grid_small():
    """Fast grid for unit tests; resolves packets up to n = 4."""
    return make_grid(32.0 * math.pi, 2**12)


@pytest.fixture(scope="session")
def grid_production():
    """Full-scale grid resolving packets up to n = 7."""
    return make_grid(32.0 * math.pi, 2**15)


@pytest.fixture(scope="session")
def cut():
    return build_cutoffs()


@pytest.fixture(scope="session")
def phi_small(grid_small):
    return build_phi(grid_small)


@pytest.fixture(scope="session")
def phi_production(grid_production):
    return build_phi(grid_production)
