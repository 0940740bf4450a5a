import math

import pytest

from continuum_sim.geometry import SectionGeometry
from continuum_sim.multisection import default_geometry


@pytest.fixture(scope="session")
def geoms():
    return default_geometry()


@pytest.fixture(scope="session")
def g10():
    """Worked-example geometry: 10 segments, 3 mm disks, 2.5 mm hole circle."""
    return SectionGeometry(
        n=10, d=2.5, h=3.0,
        s_min=38.0, s_max=162.0,
        kappa_max=0.034, theta_max=math.radians(75.0),
    )
