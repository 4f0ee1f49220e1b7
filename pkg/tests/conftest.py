import numpy as np
import pytest
from hypothesis import settings

from ftca.config import Configuration
from ftca.grid import Kind, Topology

settings.register_profile("ci", deadline=None, max_examples=60)
settings.load_profile("ci")


def sq(rows) -> Configuration:
    """Square configuration from a list of '0'/'1' strings."""
    a = np.array([[ch == "1" for ch in r] for r in rows], np.uint8)
    return Configuration(Topology.square(a.shape[0]), a)


def tri(rows) -> Configuration:
    a = np.array([[ch == "1" for ch in r] for r in rows], np.uint8)
    return Configuration(Topology(Kind.TRIANGULAR, *a.shape), a)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
