import math

import pytest

from gaitlab.models.gait import GaitParams
from gaitlab.services.morphology import make_reference_robot


@pytest.fixture
def quadruped():
    return make_reference_robot("quadruped")


@pytest.fixture
def hexapod():
    return make_reference_robot("hexapod")


@pytest.fixture
def myriapod():
    return make_reference_robot("myriapod")


@pytest.fixture
def sidewinder():
    return make_reference_robot("sidewinder")


@pytest.fixture
def tripod(hexapod):
    return GaitParams.for_robot(hexapod, 0.5, 0.5, undulation="fixed_straight")


@pytest.fixture
def small_amplitude_hexapod(hexapod):
    """Hexapod gait with 2 degree amplitudes, where the first-order estimate applies."""
    return GaitParams(D=0.6, Phi_lat=0.3, A_theta=math.radians(2.0), A_alpha=math.radians(2.0), phi_0=1.0)


@pytest.fixture(autouse=True)
def single_worker(monkeypatch):
    monkeypatch.setenv("GAITLAB_WORKERS", "1")
