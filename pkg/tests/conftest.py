import numpy as np
import pytest

from opradius.scalarmap import builtin


@pytest.fixture
def jordan2():
    return np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def six_maps():
    """The default map family used by the verification suite."""
    return [
        builtin("power", [1]),
        builtin("power", [2]),
        builtin("power", [3]),
        builtin("power", [0.5]),
        builtin("exp_minus_one"),
        builtin("log1p"),
    ]


def random_operator(rng, d):
    return (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2.0)
