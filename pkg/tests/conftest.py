import numpy as np
import pytest

from emknot import spectral
from emknot.knotfields import KnotParams

HOPFION = KnotParams.hopfion()
MIXED = KnotParams(1, 2, 1, 1)


@pytest.fixture(scope="session")
def grid128():
    return spectral.GridSpec(128, 16.0)


@pytest.fixture(scope="session")
def hopfion_state128(grid128):
    return spectral.knot_state(grid128, HOPFION)


@pytest.fixture(scope="session")
def mixed_state128(grid128):
    return spectral.knot_state(grid128, MIXED)


@pytest.fixture(scope="session")
def grid32():
    return spectral.GridSpec(32, 8.0)


@pytest.fixture(scope="session")
def hopfion_state32(grid32):
    return spectral.knot_state(grid32, HOPFION)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
