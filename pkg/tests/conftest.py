import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(12345))


def make_rng(seed):
    return np.random.Generator(np.random.Philox(seed))
