"""
Cascade models: fully recorded propagation traces and their partial observations.
"""
import math
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .network_models import NodeId


class Cascade(BaseModel):
    """
    One propagation trace.

    Nodes absent from ``times`` are ignorant (their infection time is infinite);
    ``window_T`` is the absolute end of the observation window.
    """
    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "cascade_id": "c1",
                "n_nodes": 4,
                "times": {"0": 0.0, "2": 1.5},
                "window_T": 10.0,
                "source": 0,
            }
        },
    )

    cascade_id: str = Field(default="", description="Identifier carried into reports")
    n_nodes: int = Field(..., ge=1, description="Size of the network the cascade ran on")
    times: Dict[NodeId, float] = Field(..., min_length=1, description="Infection time per infected node")
    window_T: float = Field(..., gt=0, allow_inf_nan=False, description="Observation horizon")
    source: Optional[NodeId] = Field(None, ge=0, description="True source when known")

    @model_validator(mode="after")
    def _check_times(self) -> "Cascade":
        for node, time in self.times.items():
            if not 0 <= node < self.n_nodes:
                raise ValueError(f"node {node} outside [0, {self.n_nodes})")
            if not math.isfinite(time) or time < 0:
                raise ValueError(f"infection time of node {node} must be finite and >= 0, got {time}")
            if time > self.window_T:
                raise ValueError(f"infection time {time} of node {node} exceeds window {self.window_T}")
        if self.source is not None and self.source not in self.times:
            raise ValueError(f"source {self.source} is not infected in the cascade")
        return self

    @property
    def infected(self) -> FrozenSet[NodeId]:
        return frozenset(self.times)

    @property
    def ignorant(self) -> List[NodeId]:
        return [node for node in range(self.n_nodes) if node not in self.times]

    @property
    def root(self) -> NodeId:
        """The true source, or the earliest-infected node (lowest id on ties)."""
        if self.source is not None:
            return self.source
        return min(self.times, key=lambda node: (self.times[node], node))

    @property
    def start_time(self) -> float:
        return min(self.times.values())

    def sorted_items(self) -> List[Tuple[NodeId, float]]:
        """(node, time) pairs ascending by time, then node id."""
        return sorted(self.times.items(), key=lambda item: (item[1], item[0]))


class PartialObservation(BaseModel):
    """The observed subset of one cascade; everything else is hidden."""
    model_config = ConfigDict(frozen=True)

    cascade_id: str = Field(default="", description="Identifier of the observed cascade")
    n_nodes: int = Field(..., ge=1, description="Network size")
    observed: Dict[NodeId, float] = Field(..., min_length=1, description="Observed infection times")
    hidden: FrozenSet[NodeId] = Field(..., description="Nodes without a recorded time")

    @model_validator(mode="after")
    def _check_partition(self) -> "PartialObservation":
        observed = set(self.observed)
        if observed & self.hidden:
            raise ValueError("observed and hidden sets overlap")
        if observed | self.hidden != set(range(self.n_nodes)):
            raise ValueError("observed and hidden sets must cover every network node")
        for node, time in self.observed.items():
            if not math.isfinite(time):
                raise ValueError(f"observed time of node {node} must be finite")
        return self

    @classmethod
    def from_observed(
        cls, n_nodes: int, observed: Mapping[NodeId, float], cascade_id: str = ""
    ) -> "PartialObservation":
        observed = dict(observed)
        hidden = frozenset(node for node in range(n_nodes) if node not in observed)
        return cls(cascade_id=cascade_id, n_nodes=n_nodes, observed=observed, hidden=hidden)

    @property
    def k(self) -> int:
        """Number of observed nodes."""
        return len(self.observed)

    def observed_nodes(self) -> List[NodeId]:
        return sorted(self.observed)

    def shifted(self, delta: float) -> "PartialObservation":
        """The same observation with every time shifted by ``delta``."""
        return PartialObservation.from_observed(
            self.n_nodes, {node: t + delta for node, t in self.observed.items()}, self.cascade_id
        )
