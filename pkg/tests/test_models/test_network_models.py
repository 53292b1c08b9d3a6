"""
Tests for Network and Edge validation and adjacency views.
"""
import numpy as np
import pytest
from pydantic import ValidationError

from src.models.network_models import Edge, Network


def test_edges_are_stored_in_canonical_order():
    network = Network.from_edges(3, [(2, 0, 0.5), (0, 2, 1.0), (0, 1, 2.0)])
    assert [(e.src, e.dst) for e in network.edges] == [(0, 1), (0, 2), (2, 0)]
    assert network.src.tolist() == [0, 0, 2]
    assert network.rates.tolist() == [2.0, 1.0, 0.5]


def test_permuted_edge_lists_give_equal_networks():
    triples = [(0, 1, 1.0), (1, 2, 0.5), (2, 0, 3.0), (0, 2, 0.25)]
    first = Network.from_edges(3, triples)
    second = Network.from_edges(3, list(reversed(triples)))
    assert first == second
    assert hash(first) == hash(second)


@pytest.mark.parametrize(
    "triples, message",
    [
        ([(0, 3, 1.0)], "outside"),
        ([(1, 1, 1.0)], "self-loop"),
        ([(0, 1, 1.0), (0, 1, 2.0)], "duplicate"),
    ],
)
def test_invalid_edge_sets_are_rejected(triples, message):
    with pytest.raises(ValidationError, match=message):
        Network.from_edges(3, triples)


@pytest.mark.parametrize("rate", [0.0, -1.0, float("inf"), float("nan")])
def test_edge_rate_must_be_positive_and_finite(rate):
    with pytest.raises(ValidationError):
        Edge(src=0, dst=1, rate=rate)


def test_corrupted_random_edge_lists_never_validate(rng):
    for _ in range(50):
        n = int(rng.integers(2, 8))
        triples = [(s, d, 1.0) for s in range(n) for d in range(n) if s != d and rng.random() < 0.4]
        if not triples:
            triples = [(0, 1, 1.0)]
        corruption = int(rng.integers(3))
        if corruption == 0:
            triples.append(triples[0])
        elif corruption == 1:
            node = int(rng.integers(n))
            triples.append((node, node, 1.0))
        else:
            triples.append((0, n, 1.0))
        with pytest.raises(ValidationError):
            Network.from_edges(n, triples)


def test_out_edges(chain_network):
    assert list(chain_network.out_edges(0)) == [0]
    assert list(chain_network.out_edges(3)) == []


def test_edge_index_follows_canonical_order():
    network = Network.from_edges(4, [(2, 0, 1.0), (0, 3, 1.0), (0, 1, 1.0), (3, 2, 1.0)])
    assert network.edge_index([0, 0, 2, 3], [1, 3, 0, 2]).tolist() == [0, 1, 2, 3]
    assert network.edge_index(np.array([3]), np.array([2])).tolist() == [3]
    with pytest.raises(KeyError, match="1->0"):
        network.edge_index([0, 1], [1, 0])
    with pytest.raises(KeyError):
        network.edge_index([3], [3])


def test_reversed_csr_swaps_direction(chain_network):
    weights = np.array([1.0, 2.0, 3.0])
    reverse = chain_network.reversed_csr(weights).toarray()
    expected = np.zeros((4, 4))
    expected[1, 0], expected[2, 1], expected[3, 2] = 1.0, 2.0, 3.0
    np.testing.assert_array_equal(reverse, expected)


def test_to_networkx_keeps_rates(star_network):
    graph = star_network.to_networkx()
    assert graph.number_of_nodes() == 5
    assert graph[0][3]["rate"] == 1.5


def test_empty_network_is_valid():
    network = Network(n_nodes=3)
    assert network.n_edges == 0
    assert list(network.out_edges(1)) == []
