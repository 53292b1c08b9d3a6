"""
Tests for Cascade and PartialObservation invariants.
"""
import pytest
from pydantic import ValidationError

from src.models.cascade_models import Cascade, PartialObservation


def test_cascade_helpers(sample_cascade):
    assert sample_cascade.infected == frozenset({0, 1, 2})
    assert sample_cascade.ignorant == [3]
    assert sample_cascade.root == 0
    assert sample_cascade.start_time == 0.0
    assert sample_cascade.sorted_items() == [(0, 0.0), (1, 0.7), (2, 1.5)]


def test_root_without_source_is_earliest_lowest_id():
    cascade = Cascade(n_nodes=4, times={3: 1.0, 2: 1.0, 1: 2.0}, window_T=5.0)
    assert cascade.root == 2


@pytest.mark.parametrize(
    "times, window, source",
    [
        ({0: -0.1}, 5.0, None),
        ({0: float("inf")}, 5.0, None),
        ({0: 6.0}, 5.0, None),
        ({7: 1.0}, 5.0, None),
        ({0: 0.0}, 5.0, 1),
        ({}, 5.0, None),
    ],
)
def test_invalid_cascades_are_rejected(times, window, source):
    with pytest.raises(ValidationError):
        Cascade(n_nodes=4, times=times, window_T=window, source=source)


def test_partial_observation_partitions_nodes():
    observation = PartialObservation.from_observed(5, {1: 2.0, 3: 4.0}, "c0")
    assert observation.hidden == frozenset({0, 2, 4})
    assert observation.k == 2
    assert observation.observed_nodes() == [1, 3]


def test_partial_observation_rejects_overlap_and_gaps():
    with pytest.raises(ValidationError):
        PartialObservation(n_nodes=3, observed={0: 1.0}, hidden=frozenset({0, 1, 2}))
    with pytest.raises(ValidationError):
        PartialObservation(n_nodes=3, observed={0: 1.0}, hidden=frozenset({1}))


def test_partial_observation_needs_an_observed_node():
    with pytest.raises(ValidationError):
        PartialObservation.from_observed(3, {})


def test_shifted_moves_every_time():
    observation = PartialObservation.from_observed(3, {1: 2.0, 2: 3.5})
    shifted = observation.shifted(1.25)
    assert shifted.observed == {1: 3.25, 2: 4.75}
    assert shifted.hidden == observation.hidden
