"""Shared fixtures: the benchmark dynamics and truncation boxes.

Session scope keeps the conjugator mode tables and growth sequences
cached across files; everything downstream treats them as immutable.
"""

import numpy as np
import pytest

from nctorus import dynamics
from nctorus.gns import TruncationBox


@pytest.fixture(scope="session")
def bench():
    return dynamics.benchmark()


@pytest.fixture(scope="session")
def rot():
    # rotation with the same angle as the benchmark, identity conjugator
    return dynamics.rotation(dynamics.benchmark().alpha)


@pytest.fixture(scope="session")
def box():
    # the acceptance-scale box: blocks |k| <= 16, modes |l| <= 16, grid 256
    return TruncationBox(16, 16)


@pytest.fixture(scope="session")
def small_box():
    return TruncationBox(6, 8)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260814)
