"""
Input models for experiment requests and localization preferences.
"""
import math
from enum import Enum
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config.settings import settings
from .inference_models import SolverConfig

# rates uniform on [1/(e-1), e/(e-1)] give a mean edge delay E[1/alpha] of exactly 1
UNIT_MEAN_DELAY_RATES: Tuple[float, float] = (1.0 / (math.e - 1.0), math.e / (math.e - 1.0))


class ObservationRegime(str, Enum):
    """How observed nodes are picked from a cascade."""
    RANDOM = "random"
    FINAL = "final"


class ScoringObjective(str, Enum):
    """Residual aggregate used to rank candidate sources."""
    SSE = "sse"
    MSE = "mse"


class TrialConfig(BaseModel):
    """Synthetic localization experiment settings."""
    model_config = ConfigDict(
        frozen=True,
        extra="forbid",
        json_schema_extra={
            "example": {
                "n_nodes": 64,
                "edge_density": 0.025,
                "rate_range": [0.582, 1.582],
                "n_train_cascades": 300,
                "n_test_cascades_per_source": 8,
                "observed_fraction": 0.1,
                "regime": "random",
                "n_samples": 500,
                "k_list": [1, 5, 10],
                "n_trials": 20,
                "master_seed": 7,
            }
        },
    )

    n_nodes: int = Field(default=64, ge=1, description="Ground-truth network size")
    edge_density: float = Field(default=0.025, gt=0, le=1, description="Probability of each directed pair")
    rate_range: Tuple[float, float] = Field(default=UNIT_MEAN_DELAY_RATES, description="Uniform range of edge rates")
    n_train_cascades: int = Field(default=300, ge=1, description="Historical cascades used for inference")
    n_test_cascades_per_source: int = Field(default=8, ge=1, description="Cascades in each localization set")
    observed_fraction: float = Field(default=0.1, gt=0, le=1, description="Observed share of infected nodes")
    regime: ObservationRegime = Field(default=ObservationRegime.RANDOM, description="Observation regime")
    n_samples: int = Field(default=500, ge=1, description="Monte-Carlo delay samples")
    k_list: List[int] = Field(default_factory=lambda: [1, 5, 10], min_length=1, description="Top-k cut-offs")
    n_trials: int = Field(default=20, ge=1, description="Independent trials")
    master_seed: int = Field(default=0, ge=0, description="Seed of the whole experiment")
    window_T: float = Field(default=30.0, gt=0, description="Observation window of every cascade")
    min_cascade_len: int = Field(
        default_factory=lambda: settings.MIN_CASCADE_LEN, ge=1, description="Infected nodes a test cascade needs"
    )
    max_resimulations: int = Field(
        default_factory=lambda: settings.MAX_RESIMULATIONS, ge=1, description="Retry cap when filtering long cascades"
    )
    start_time_spread: float = Field(default=5.0, ge=0, description="Test start times are uniform in [0, spread]")
    objective: ScoringObjective = Field(default=ScoringObjective.SSE, description="Ranking objective")
    solver: SolverConfig = Field(default_factory=SolverConfig, description="Rate inference settings")

    @field_validator("rate_range")
    @classmethod
    def _check_rate_range(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        low, high = value
        if not 0 < low <= high:
            raise ValueError(f"rate_range must satisfy 0 < min <= max, got {value}")
        return value

    @field_validator("k_list")
    @classmethod
    def _check_k_list(cls, value: List[int]) -> List[int]:
        if any(k < 1 for k in value):
            raise ValueError("every k must be >= 1")
        return sorted(set(value))

    @model_validator(mode="after")
    def _check_lengths(self) -> "TrialConfig":
        if self.min_cascade_len > self.n_nodes:
            raise ValueError(
                f"min_cascade_len ({self.min_cascade_len}) cannot exceed n_nodes ({self.n_nodes})"
            )
        return self
