import numpy as np
import pytest

from mnvlab.fields import FieldEvaluator


@pytest.fixture(scope="session")
def C():
    return 0.7


@pytest.fixture(scope="session")
def enneper_field(C):
    return FieldEvaluator(C=C)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
