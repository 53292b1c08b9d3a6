"""
Candidate-source scores and their ranking.
"""
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from .input_models import ScoringObjective
from .network_models import NodeId


class CandidateScore(BaseModel):
    """Squared-error score of one candidate source over a cascade set."""
    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "candidate": 12,
                "sse": 0.5,
                "start_times": {"c0": 3.5, "c1": -0.25},
                "coverage": 1.0,
                "admissible_cascades": 2,
            }
        },
    )

    candidate: NodeId = Field(..., description="Candidate source node")
    sse: float = Field(..., ge=0, description="Objective value over admissible cascades")
    start_times: Dict[str, float] = Field(
        default_factory=dict, description="Estimated start time per admissible cascade"
    )
    coverage: float = Field(..., ge=0, le=1, description="Reachable share of (cascade, observed) pairs")
    admissible_cascades: int = Field(default=0, ge=0, description="Cascades fully reachable from the candidate")

    @property
    def admissible(self) -> bool:
        return self.admissible_cascades > 0

    def sort_key(self):
        return (self.sse, -self.coverage, self.candidate)


class Ranking(BaseModel):
    """Admissible candidates, best first: ascending sse, then descending coverage, then id."""
    model_config = ConfigDict(frozen=True)

    scores: List[CandidateScore] = Field(default_factory=list, description="Ordered candidate scores")
    objective: ScoringObjective = Field(default=ScoringObjective.SSE, description="Objective used")
    n_candidates: int = Field(default=0, ge=0, description="Size of the candidate pool before filtering")

    @classmethod
    def from_scores(
        cls, scores: List[CandidateScore], objective: ScoringObjective, n_candidates: int
    ) -> "Ranking":
        admissible = sorted((s for s in scores if s.admissible), key=CandidateScore.sort_key)
        return cls(scores=admissible, objective=objective, n_candidates=n_candidates)

    def __len__(self) -> int:
        return len(self.scores)

    def position(self, node: NodeId) -> Optional[int]:
        """1-based rank of ``node``, or None if it is not ranked."""
        for rank, score in enumerate(self.scores, start=1):
            if score.candidate == node:
                return rank
        return None

    def top(self, k: int) -> List[CandidateScore]:
        return self.scores[:k]

    def score_of(self, node: NodeId) -> Optional[CandidateScore]:
        for score in self.scores:
            if score.candidate == node:
                return score
        return None
