"""
Shared fixtures for the test suite.
"""
import numpy as np
import pytest

from src.models.cascade_models import Cascade
from src.models.network_models import Network


def random_network(rng: np.random.Generator, n_nodes: int, density: float, low: float = 0.5, high: float = 2.0) -> Network:
    """Directed network with each ordered pair present with probability ``density``."""
    triples = [
        (s, d, float(rng.uniform(low, high)))
        for s in range(n_nodes)
        for d in range(n_nodes)
        if s != d and rng.random() < density
    ]
    return Network.from_edges(n_nodes, triples)


@pytest.fixture
def chain_network() -> Network:
    """0 -> 1 -> 2 -> 3, unit rates."""
    return Network.from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)])


@pytest.fixture
def two_node_network() -> Network:
    return Network.from_edges(2, [(0, 1, 1.0)])


@pytest.fixture
def star_network() -> Network:
    """Hub 0 reaches 1..4; only 0 can reach every leaf."""
    return Network.from_edges(5, [(0, leaf, 1.5) for leaf in range(1, 5)])


@pytest.fixture
def sample_cascade() -> Cascade:
    return Cascade(cascade_id="c1", n_nodes=4, times={0: 0.0, 1: 0.7, 2: 1.5}, window_T=10.0, source=0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
