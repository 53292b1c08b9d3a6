"""
Models for transmission-rate inference from fully observed cascades.
"""
from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .network_models import Network, NodeId


class RateMatrix(BaseModel):
    """
    Transmission rates over candidate edges.

    Pairs outside ``alpha`` are structurally zero.
    """
    model_config = ConfigDict(frozen=True)

    n_nodes: int = Field(..., ge=1, description="Network size")
    alpha: Dict[Tuple[NodeId, NodeId], float] = Field(
        default_factory=dict, description="Rate per candidate (src, dst) pair"
    )

    @field_validator("alpha", mode="after")
    @classmethod
    def _non_negative(cls, alpha: Dict[Tuple[NodeId, NodeId], float]) -> Dict[Tuple[NodeId, NodeId], float]:
        for pair, value in alpha.items():
            if not value >= 0:
                raise ValueError(f"rate of {pair} must be >= 0, got {value}")
        return alpha

    def get(self, src: NodeId, dst: NodeId) -> float:
        return self.alpha.get((src, dst), 0.0)

    @classmethod
    def from_network(cls, network: Network) -> "RateMatrix":
        return cls(n_nodes=network.n_nodes, alpha=network.as_dict())

    def to_network(self, prune_threshold: float = 0.0) -> Network:
        """Network holding every pair whose rate exceeds ``prune_threshold``."""
        return Network.from_edges(
            self.n_nodes,
            ((s, d, value) for (s, d), value in sorted(self.alpha.items()) if value > prune_threshold),
        )


class SolverConfig(BaseModel):
    """Projected gradient ascent settings."""
    model_config = ConfigDict(
        frozen=True,
        extra="forbid",
        json_schema_extra={
            "example": {
                "step_size": 0.1,
                "max_iters": 2000,
                "tolerance": 1e-9,
                "prune_threshold": 1e-4,
                "initial_rate": 0.5,
            }
        },
    )

    step_size: float = Field(default=0.1, gt=0, description="Initial trial step of the line search")
    max_iters: int = Field(default=2000, ge=1, description="Iteration cap per destination node")
    tolerance: float = Field(default=1e-9, gt=0, description="Relative log-likelihood change to stop at")
    prune_threshold: float = Field(default=1e-4, ge=0, description="Rates at or below this are dropped")
    initial_rate: float = Field(default=0.5, gt=0, description="Starting rate of every candidate edge")
    armijo: float = Field(default=1e-4, gt=0, lt=1, description="Sufficient-increase constant")
    max_backtracks: int = Field(default=60, ge=1, description="Step halvings before giving up")


class NodeSolution(BaseModel):
    """Outcome of one destination node's subproblem."""
    node: NodeId = Field(..., description="Destination node")
    parents: List[NodeId] = Field(default_factory=list, description="Candidate parents, ascending")
    rates: List[float] = Field(default_factory=list, description="Rate per candidate parent")
    log_likelihood: float = Field(..., description="Final subproblem log-likelihood")
    iterations: int = Field(..., ge=0, description="Accepted ascent steps")
    converged: bool = Field(..., description="Relative change fell below tolerance")
    history: List[float] = Field(default_factory=list, description="Log-likelihood after each step")


class InferenceResult(BaseModel):
    """Inferred network plus convergence diagnostics."""
    network: Network = Field(..., description="Edges with rate above the prune threshold")
    rates: RateMatrix = Field(..., description="Unpruned rates over all candidate pairs")
    log_likelihood: float = Field(..., description="Sum of cascade log-likelihoods at the solution")
    iterations: int = Field(..., ge=0, description="Largest iteration count over destination nodes")
    total_iterations: int = Field(..., ge=0, description="Iterations summed over destination nodes")
    converged: bool = Field(..., description="Every subproblem converged")
    warnings: List[str] = Field(default_factory=list, description="Non-convergence and other notices")
    node_solutions: Dict[NodeId, NodeSolution] = Field(default_factory=dict)
