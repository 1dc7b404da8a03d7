import numpy as np
import pytest

from states import BreedingParams, bred_gkp, vacuum


@pytest.fixture
def vac():
    return vacuum(1)


@pytest.fixture
def bred3():
    """Lattice-matched state after three rounds, ξ = 1."""
    return bred_gkp(BreedingParams(rounds=3, cat_squeezing=1.0))


@pytest.fixture
def cat():
    return bred_gkp(BreedingParams(rounds=0, cat_amplitude=4.0, cat_squeezing=0.5))


@pytest.fixture
def random_points():
    np.random.seed(42)
    return np.random.randn(50, 2) * 3
