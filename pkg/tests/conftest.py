"""Test fixtures and helpers to make widely available in the package"""

import os

import numpy as np
import pytest

from ricciode.ansatz_family import ParamSet
from ricciode.catalog import Case3, case3_t_of_rho
from ricciode.dynamics import State, integrate

CASE1 = ParamSet(1, 0, 0, 0, -1, 2)
CASE2 = ParamSet(1, 0, -2, 0, -1, 0)
CASE3 = ParamSet(1, 0, 0, 0, -1, -2)
FUBINI_STUDY = ParamSet(2, 0, -1, 0, 1, 0)
# case 3 with the sign for which A2 grows forward in t
CASE3_GROWING = ParamSet(-1, 0, 0, 0, 1, 2)


def get_data_file_path(filename: str) -> str:
    data_path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")
    return os.path.join(data_path, filename)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture(scope="session")
def case3_start():
    """State on the c = 1 closed form at rho = 1/2"""
    t, a1, a2 = Case3(1.0).state(0.5)
    assert t == pytest.approx(case3_t_of_rho(1.0, 0.5))
    return State(t, a1, a2)


@pytest.fixture(scope="session")
def case3_to_singularity(case3_start):
    """Backward run into the singular time t0 = 0"""
    return integrate(CASE3_GROWING, case3_start, t_end=-1.0, tol=1e-12)


@pytest.fixture(scope="session")
def case3_to_infinity(case3_start):
    return integrate(CASE3_GROWING, case3_start, t_end=1e4, tol=1e-12)
