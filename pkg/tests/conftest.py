import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
    deadline=None,
)
settings.load_profile("default")

from itercc import Ring  # noqa: E402


@pytest.fixture
def field():
    return Ring([])


@pytest.fixture
def dual():
    """Q[e]/(e^2)"""
    return Ring([2])


@pytest.fixture
def cubic():
    """Q[e]/(e^3)"""
    return Ring([3])


@pytest.fixture
def two_gen():
    """Q[e1, e2]/(e1^2, e2^3)"""
    return Ring([2, 3])


@pytest.fixture
def rng():
    return random.Random(20240811)
