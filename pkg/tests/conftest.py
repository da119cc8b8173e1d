import numpy as np
import pytest

from domebound.bendbounds import c1
from domebound.pipeline import compute_bound
from domebound.region import build_step, polygon_from_step
from domebound.scmap import solve_parameters

# reference values computed with 40-digit mpmath and frozen here
ORACLE = {
    "c_148": 0.47538977233116522,
    "theta_148": 1.1123628815975207,
    "G_148": 1.3271853628371658,
    "c_1": 0.32747517724914086,
    "theta_1": 1.2490220297840361,
    "G_1": 0.94867578970926891,
    "h_1": 0.70502684355523799,
    "F_1": 4.8731316200691105,
    "c1_148": 5.0278888267842759,
    "L0": 1.9150080481545375,
}


@pytest.fixture(scope="session")
def oracle():
    return ORACLE


@pytest.fixture(scope="session")
def step_148():
    return build_step(1.48)


@pytest.fixture(scope="session")
def small_step():
    return build_step(1.48, half_width=6.0, samples_per_branch=16)


@pytest.fixture(scope="session")
def small_map(small_step):
    return solve_parameters(polygon_from_step(small_step))


@pytest.fixture(scope="session")
def bound_148():
    return compute_bound(1.48)


@pytest.fixture(scope="session")
def marked_148():
    return 0j, 1j * c1(1.48)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
