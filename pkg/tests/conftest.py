import numpy as np
import pytest
from hypothesis import settings

from lclimit.fields import Grid, Params

settings.register_profile("lab", deadline=None, max_examples=25, derandomize=True)
settings.load_profile("lab")


@pytest.fixture
def torus64():
    return Grid((2 * np.pi, 2 * np.pi), (64, 64))


@pytest.fixture
def box33():
    return Grid((np.pi, np.pi), (33, 33), boundary="dirichlet-rectangle")


@pytest.fixture
def params():
    return Params(mu=0.5, xi=0.0, lam=0.5, alpha=1.0, a=1.0, gamma=2.0, eps=0.1, zeta=0.5)
