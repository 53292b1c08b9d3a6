"""
Named experiment configurations and YAML config loading.
"""
from pathlib import Path
from typing import Any, Dict, Union

import yaml

from ..models.inference_models import SolverConfig
from ..models.input_models import UNIT_MEAN_DELAY_RATES, TrialConfig


EXPERIMENT_PRESETS: Dict[str, Dict[str, Any]] = {
    "smoke": {
        "description": "Seconds-long sanity run on a small dense network",
        "trial": {
            "n_nodes": 12,
            "edge_density": 0.3,
            "n_train_cascades": 60,
            "n_test_cascades_per_source": 3,
            "observed_fraction": 0.3,
            "n_samples": 50,
            "k_list": [1, 3, 5],
            "n_trials": 2,
            "min_cascade_len": 4,
        },
    },
    "random_observed": {
        "description": "Sparse 64-node networks with unit mean delay, 10% of infected nodes observed uniformly at random",
        "trial": {
            "n_nodes": 64,
            "edge_density": 0.025,
            "rate_range": UNIT_MEAN_DELAY_RATES,
            "window_T": 30.0,
            "n_train_cascades": 300,
            "n_test_cascades_per_source": 8,
            "observed_fraction": 0.1,
            "regime": "random",
            "n_samples": 500,
            "n_trials": 20,
        },
    },
    "final_nodes": {
        "description": "Same networks, observing the latest-infected 10% of each cascade",
        "trial": {
            "n_nodes": 64,
            "edge_density": 0.025,
            "rate_range": UNIT_MEAN_DELAY_RATES,
            "window_T": 30.0,
            "n_train_cascades": 300,
            "n_test_cascades_per_source": 8,
            "observed_fraction": 0.1,
            "regime": "final",
            "n_samples": 500,
            "n_trials": 20,
        },
    },
    "single_cascade_sets": {
        # small sets of 1 to 6 cascades; sweep n_test_cascades_per_source over 1..6
        "description": "Single-cascade sets with random observation, the start of a set-size sweep",
        "trial": {
            "n_nodes": 64,
            "edge_density": 0.025,
            "rate_range": UNIT_MEAN_DELAY_RATES,
            "window_T": 30.0,
            "n_train_cascades": 300,
            "n_test_cascades_per_source": 1,
            "observed_fraction": 0.1,
            "regime": "random",
            "n_samples": 500,
            "n_trials": 20,
        },
    },
}


def get_preset(name: str) -> TrialConfig:
    """
    Get the TrialConfig of a named preset.

    Args:
        name: Preset identifier (smoke, random_observed, final_nodes, single_cascade_sets)

    Returns:
        Validated TrialConfig

    Raises:
        ValueError: If the preset is not recognized
    """
    if name not in EXPERIMENT_PRESETS:
        raise ValueError(
            f"Unknown preset: {name}. "
            f"Must be one of {list(EXPERIMENT_PRESETS.keys())}"
        )
    return TrialConfig(**EXPERIMENT_PRESETS[name]["trial"])


def trial_config_from_dict(data: Dict[str, Any]) -> TrialConfig:
    """
    Build a TrialConfig from ``{"preset": ..., "trial": {...}, "solver": {...}}``.

    Every section is optional; ``trial`` keys override the preset and ``solver`` keys
    override the SolverConfig defaults.

    Raises:
        ValueError: On unknown sections or keys, or invalid values
    """
    if not isinstance(data, dict):
        raise ValueError("experiment config must be a mapping")
    unknown = set(data) - {"preset", "trial", "solver"}
    if unknown:
        raise ValueError(f"Unknown config sections: {sorted(unknown)}. Must be among ['preset', 'trial', 'solver']")

    values: Dict[str, Any] = {}
    if data.get("preset") is not None:
        values.update(get_preset(str(data["preset"])).model_dump())
    trial = data.get("trial") or {}
    if not isinstance(trial, dict):
        raise ValueError("'trial' section must be a mapping")
    values.update(trial)

    solver = data.get("solver")
    if solver is not None:
        if not isinstance(solver, dict):
            raise ValueError("'solver' section must be a mapping")
        base = values.get("solver") or {}
        if isinstance(base, SolverConfig):
            base = base.model_dump()
        values["solver"] = SolverConfig(**{**base, **solver})
    return TrialConfig(**values)


def load_trial_config(path: Union[str, Path]) -> TrialConfig:
    """
    Load a TrialConfig from a YAML file.

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: On YAML syntax errors, unknown keys or invalid values
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ValueError(f"{path}: invalid YAML: {exc}") from exc
    return trial_config_from_dict(data or {})
