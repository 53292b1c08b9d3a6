"""
Monte-Carlo delay samples and the expected infection times estimated from them.
"""
import math
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from .network_models import NodeId


class DelaySample(BaseModel):
    """One draw of per-edge transmission delays, indexed by canonical edge order."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    delays: np.ndarray = Field(..., description="Delay per network edge, canonical edge order")
    seed_index: int = Field(..., ge=0, description="Sample index within the master seed's stream")
    master_seed: int = Field(default=0, description="Seed the sample was derived from")

    @field_validator("delays", mode="after")
    @classmethod
    def _check_delays(cls, delays: np.ndarray) -> np.ndarray:
        delays = np.array(delays, dtype=np.float64)
        if delays.ndim != 1:
            raise ValueError("delays must be one-dimensional")
        if delays.size and not np.all(delays > 0):
            raise ValueError("every delay must be strictly positive")
        delays.setflags(write=False)
        return delays

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DelaySample):
            return NotImplemented
        return (
            self.seed_index == other.seed_index
            and self.master_seed == other.master_seed
            and np.array_equal(self.delays, other.delays)
        )

    def __hash__(self) -> int:
        return hash((self.seed_index, self.master_seed, self.delays.tobytes()))


class ExpectedDistances(BaseModel):
    """
    Averaged shortest-path times from every candidate source to every observed node.

    Arrays are shaped (len(candidates), len(observed)). Unreachable pairs hold +inf in
    ``t_hat`` and zero in ``reach_count``.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    candidates: Tuple[NodeId, ...] = Field(..., description="Candidate source nodes, ascending")
    observed: Tuple[NodeId, ...] = Field(..., description="Observed nodes, ascending")
    t_hat: np.ndarray = Field(..., description="Mean path time per (candidate, observed)")
    reach_count: np.ndarray = Field(..., description="Samples in which a path existed")
    std_error: np.ndarray = Field(..., description="Standard error of each mean")
    n_samples: int = Field(..., ge=1, description="Monte-Carlo samples drawn")

    _lookup: Dict[NodeId, int] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _check_shapes(self) -> "ExpectedDistances":
        shape = (len(self.candidates), len(self.observed))
        for name in ("t_hat", "reach_count", "std_error"):
            if getattr(self, name).shape != shape:
                raise ValueError(f"{name} must have shape {shape}")
        if np.any(self.reach_count > self.n_samples):
            raise ValueError("reach_count cannot exceed n_samples")
        if not np.array_equal(np.isfinite(self.t_hat), self.reach_count > 0):
            raise ValueError("t_hat must be finite exactly where reach_count > 0")
        return self

    def model_post_init(self, __context) -> None:
        self._lookup = {node: i for i, node in enumerate(self.candidates)}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExpectedDistances):
            return NotImplemented
        return (
            self.candidates == other.candidates
            and self.observed == other.observed
            and self.n_samples == other.n_samples
            and np.array_equal(self.t_hat, other.t_hat)
            and np.array_equal(self.reach_count, other.reach_count)
        )

    __hash__ = None

    def _index(self, candidate: NodeId) -> int:
        try:
            return self._lookup[candidate]
        except KeyError:
            raise KeyError(f"{candidate} is not a candidate of this estimate") from None

    def row(self, candidate: NodeId) -> np.ndarray:
        """Expected times from ``candidate`` to each observed node, in ``observed`` order."""
        return self.t_hat[self._index(candidate)]

    def reach_row(self, candidate: NodeId) -> np.ndarray:
        return self.reach_count[self._index(candidate)]

    def as_mapping(self, candidate: NodeId) -> Dict[NodeId, float]:
        return {node: float(t) for node, t in zip(self.observed, self.row(candidate))}

    def get(self, candidate: NodeId, observed: NodeId) -> Optional[float]:
        """Expected time, or None when no sample reached ``observed``."""
        value = float(self.t_hat[self._index(candidate), self.observed.index(observed)])
        return value if math.isfinite(value) else None

    def coverage(self, candidate: NodeId) -> float:
        """Fraction of observed nodes reachable from ``candidate`` in at least one sample."""
        return float(np.mean(self.reach_row(candidate) > 0))
