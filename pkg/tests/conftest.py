"""
Shared fixtures for the ringlight test suite.
"""

import numpy as np
import pytest

from ringlight.core.logging import setup_logging
from ringlight.services.gaussian import BathParams
from ringlight.services.modulation import resonant_rectangular, resonant_sinusoidal
from ringlight.services.observables import ClosedFormParams, SinusoidalShape

# nu of the weak sinusoidal modulation to first order: f0 h / 4
SIN_NU = np.pi / 400


@pytest.fixture(scope="session", autouse=True)
def quiet_logging():
    setup_logging("WARNING")


@pytest.fixture
def meissner():
    """Optimally tuned rectangular profile, f_r = 2, T = 1, nu = log 2."""
    return resonant_rectangular(2.0, 1.0)


@pytest.fixture
def weak_meissner():
    """Resonant rectangular profile with nu = pi/400, close to that of ``mathieu``."""
    return resonant_rectangular(np.exp(SIN_NU), 1.0)


@pytest.fixture
def mathieu():
    """Sinusoidal profile at its first resonance, f0 = pi, h = 0.01, T = 1."""
    return resonant_sinusoidal(np.pi, 0.01)


@pytest.fixture
def warm_bath():
    return BathParams(gamma=0.05, nbar=1.0)


@pytest.fixture
def sin_params():
    """Closed-form inputs for the sinusoidal figures with nominal nu."""
    return ClosedFormParams(nu=SIN_NU, gamma=0.05, nbar=1.0, T=1.0, shape=SinusoidalShape())
