"""
Tests for TrialConfig and SolverConfig validation.
"""
import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.config.settings import Settings
from src.models.inference_models import RateMatrix, SolverConfig
from src.models.input_models import UNIT_MEAN_DELAY_RATES, ObservationRegime, TrialConfig


def test_trial_config_defaults():
    config = TrialConfig()
    assert config.observed_fraction == 0.1
    assert config.n_samples == 500
    assert config.n_test_cascades_per_source == 8
    assert config.min_cascade_len == 27
    assert config.k_list == [1, 5, 10]
    assert config.regime is ObservationRegime.RANDOM


def test_k_list_is_sorted_and_deduplicated():
    assert TrialConfig(k_list=[10, 1, 5, 1]).k_list == [1, 5, 10]


@pytest.mark.parametrize(
    "overrides",
    [
        {"observed_fraction": 0.0},
        {"observed_fraction": 1.5},
        {"n_trials": 0},
        {"k_list": [0, 1]},
        {"rate_range": (2.0, 1.0)},
        {"rate_range": (0.0, 1.0)},
        {"n_nodes": 10, "min_cascade_len": 11},
        {"unknown_field": 1},
    ],
)
def test_invalid_trial_configs(overrides):
    with pytest.raises(ValidationError):
        TrialConfig(**overrides)


def test_solver_config_rejects_unknown_keys():
    with pytest.raises(ValidationError):
        SolverConfig(learning_rate=0.1)


def test_rate_matrix_round_trips_through_network():
    rates = RateMatrix(n_nodes=3, alpha={(0, 1): 1.0, (1, 2): 5e-5, (2, 0): 0.3})
    network = rates.to_network(prune_threshold=1e-4)
    assert network.as_dict() == {(0, 1): 1.0, (2, 0): 0.3}
    assert RateMatrix.from_network(network).get(2, 0) == 0.3
    with pytest.raises(ValidationError):
        RateMatrix(n_nodes=2, alpha={(0, 1): -1.0})


def test_cascade_filter_defaults_follow_settings(monkeypatch):
    monkeypatch.setattr(Settings, "MIN_CASCADE_LEN", 12)
    monkeypatch.setattr(Settings, "MAX_RESIMULATIONS", 7)
    config = TrialConfig()
    assert config.min_cascade_len == 12
    assert config.max_resimulations == 7
    assert TrialConfig(min_cascade_len=3).min_cascade_len == 3


def test_default_rate_range_has_unit_mean_delay():
    low, high = TrialConfig().rate_range
    assert (low, high) == UNIT_MEAN_DELAY_RATES
    assert high - low == pytest.approx(1.0)
    assert math.log(high / low) / (high - low) == pytest.approx(1.0)
    rates = np.random.default_rng(0).uniform(low, high, size=200_000)
    assert np.mean(1.0 / rates) == pytest.approx(1.0, abs=0.01)
