import math

import numpy as np
import pytest

from smlab.main.case import EQUIDISTANT
from smlab.main.operators import diagonal_model, jordan_model
from smlab.main.rbound import SearchConfig
from smlab.main.spaces import GridFunction, make_partition, bump


@pytest.fixture
def diagonal():
    return diagonal_model([1.0, 2.0, 4.0])


@pytest.fixture
def jordan1():
    return jordan_model(1)


@pytest.fixture
def jordan2():
    return jordan_model(2)


@pytest.fixture
def part():
    return make_partition(EQUIDISTANT)


@pytest.fixture
def search():
    return SearchConfig(tuples=(1, 2, 4), restarts=2, iterations=20, seed=3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def bump_function(radius=3.0, center=0.0, lower=-16.0, upper=16.0,
                  spacing=2**-6):
    """Get the smooth bump of the given radius as a grid function."""
    count = int(round((upper-lower)/spacing)) + 1
    s = lower + spacing*np.arange(count)
    return GridFunction(lower, spacing, bump((s-center)/radius))


def random_matrices(rng, count, n):
    shape = (count, n, n)
    return rng.standard_normal(shape) + 1j*rng.standard_normal(shape)


def jordan_norm(t):
    """Get the spectral norm of [[1, it], [0, 1]]."""
    return (abs(t) + math.sqrt(t*t+4))/2
