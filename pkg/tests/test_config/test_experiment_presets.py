"""
Tests for experiment presets and YAML config loading.
"""
import pytest
from pydantic import ValidationError

from src.config.experiment_presets import (
    EXPERIMENT_PRESETS,
    get_preset,
    load_trial_config,
    trial_config_from_dict,
)
from src.models.input_models import ObservationRegime


@pytest.mark.parametrize("name", sorted(EXPERIMENT_PRESETS))
def test_every_preset_is_a_valid_config(name):
    config = get_preset(name)
    assert config.n_trials >= 1
    assert EXPERIMENT_PRESETS[name]["description"]


def test_preset_regimes():
    assert get_preset("random_observed").regime is ObservationRegime.RANDOM
    assert get_preset("final_nodes").regime is ObservationRegime.FINAL
    assert get_preset("single_cascade_sets").n_test_cascades_per_source == 1


def test_unknown_preset_lists_the_choices():
    with pytest.raises(ValueError, match="smoke"):
        get_preset("huge")


def test_trial_keys_override_the_preset():
    config = trial_config_from_dict({"preset": "smoke", "trial": {"n_trials": 5}, "solver": {"max_iters": 50}})
    assert config.n_trials == 5
    assert config.n_nodes == 12
    assert config.solver.max_iters == 50
    assert config.solver.step_size == 0.1


def test_unknown_sections_and_keys_are_rejected():
    with pytest.raises(ValueError, match="Unknown config sections"):
        trial_config_from_dict({"trials": {}})
    with pytest.raises(ValidationError):
        trial_config_from_dict({"trial": {"nodes": 5}})
    with pytest.raises(ValidationError):
        trial_config_from_dict({"solver": {"learning_rate": 0.1}})
    with pytest.raises(ValueError):
        trial_config_from_dict(["smoke"])


def test_load_yaml_config(tmp_path):
    path = tmp_path / "experiment.yaml"
    path.write_text(
        "preset: smoke\n"
        "trial:\n"
        "  regime: final\n"
        "  k_list: [5, 1]\n"
        "solver:\n"
        "  tolerance: 1.0e-6\n",
        encoding="utf-8",
    )
    config = load_trial_config(path)
    assert config.regime is ObservationRegime.FINAL
    assert config.k_list == [1, 5]
    assert config.solver.tolerance == 1e-6


def test_empty_yaml_gives_defaults(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("", encoding="utf-8")
    assert load_trial_config(path).n_nodes == 64


def test_broken_yaml_is_a_value_error(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("trial: [unclosed\n", encoding="utf-8")
    with pytest.raises(ValueError, match="invalid YAML"):
        load_trial_config(path)


def test_missing_config_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_trial_config(tmp_path / "absent.yaml")
