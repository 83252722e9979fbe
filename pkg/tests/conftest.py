"""Shared fixtures for the magsqueeze test suite.

Matrix-exponential oracles make individual hypothesis examples slow, so the
profile drops the deadline and keeps example counts moderate; tests that are
cheap opt back in to more examples locally.
"""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from magsqueeze.model import PhysicalParams, derive

# the params fixture is a frozen dataclass, safe to share across examples
settings.register_profile(
    "research",
    deadline=None,
    max_examples=25,
    suppress_health_check=[
        HealthCheck.too_slow,
        HealthCheck.function_scoped_fixture,
    ],
)
settings.load_profile("research")


@pytest.fixture
def params():
    """Default working-point parameters shared across the suite."""
    return PhysicalParams()


@pytest.fixture
def derived(params):
    return derive(params)


@pytest.fixture
def rng():
    return np.random.default_rng(20250823)
