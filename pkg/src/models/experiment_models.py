"""
Models for synthetic localization experiments and their reports.
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from .input_models import TrialConfig
from .network_models import NodeId


class StartTimeEstimate(BaseModel):
    """True and estimated start time of one test cascade, at the true source."""
    cascade_id: str = Field(..., description="Test cascade identifier")
    true_start: float = Field(..., description="Infection time of the true source")
    estimated_start: Optional[float] = Field(
        default=None, description="t_s estimated at the true source; None when inadmissible"
    )

    @property
    def abs_error(self) -> Optional[float]:
        if self.estimated_start is None:
            return None
        return abs(self.estimated_start - self.true_start)


class TrialRow(BaseModel):
    """Outcome of one trial."""
    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "trial": 0,
                "true_source": 17,
                "rank": 3,
                "n_candidates": 49,
                "n_ranked": 41,
                "true_edges": 241,
                "inferred_edges": 263,
                "inference_converged": True,
                "start_times": [{"cascade_id": "t0-0", "true_start": 1.2, "estimated_start": 1.05}],
            }
        }
    )

    trial: int = Field(..., ge=0, description="Trial index")
    true_source: NodeId = Field(..., description="Source of every test cascade")
    rank: Optional[int] = Field(default=None, ge=1, description="1-based rank of the true source; None if absent")
    n_candidates: int = Field(..., ge=0, description="Hidden nodes of the cascade set")
    n_ranked: int = Field(..., ge=0, description="Admissible candidates in the ranking")
    true_edges: int = Field(..., ge=0, description="Edges of the ground-truth network")
    inferred_edges: int = Field(..., ge=0, description="Edges of the inferred network")
    inference_converged: bool = Field(..., description="Every inference subproblem converged")
    start_times: List[StartTimeEstimate] = Field(default_factory=list)


class SkippedTrial(BaseModel):
    trial: int = Field(..., ge=0)
    reason: str = Field(..., description="Why the trial produced no row")


class ExperimentReport(BaseModel):
    """Per-trial rows plus aggregate metrics of one experiment."""
    config: TrialConfig = Field(..., description="Configuration the experiment ran with")
    rows: List[TrialRow] = Field(default_factory=list)
    skipped: List[SkippedTrial] = Field(default_factory=list)
    success_probability: Optional[float] = Field(
        default=None, ge=0, le=1, description="Share of trials ranking the true source first"
    )
    topk_success: Dict[int, float] = Field(default_factory=dict, description="Top-k success per k")
    random_baseline: Dict[int, float] = Field(
        default_factory=dict, description="Mean of min(k, |H_C|) / |H_C| over trials, per k"
    )
    mean_abs_start_error: Optional[float] = Field(
        default=None, ge=0, description="Mean |estimated - true| start time at the true source"
    )
    timings: Dict[str, float] = Field(default_factory=dict, description="Wall-clock seconds per stage")

    @property
    def n_completed(self) -> int:
        return len(self.rows)

    def report_json(self, include_timings: bool = False) -> str:
        """JSON report; byte-identical across runs unless timings are included."""
        exclude = None if include_timings else {"timings"}
        return self.model_dump_json(indent=2, exclude=exclude)


class SweepPoint(BaseModel):
    value: Any = Field(..., description="Value of the swept field")
    report: ExperimentReport


class SweepReport(BaseModel):
    """Experiments rerun while varying one TrialConfig field."""
    field: str = Field(..., description="Swept TrialConfig field")
    points: List[SweepPoint] = Field(default_factory=list)

    def curve(self, k: Optional[int] = None) -> List[tuple]:
        """(value, metric) pairs: success probability, or top-k success when ``k`` is given."""
        pairs = []
        for point in self.points:
            if k is None:
                metric = point.report.success_probability
            else:
                metric = point.report.topk_success.get(k)
            pairs.append((point.value, metric))
        return pairs

    def report_json(self, include_timings: bool = False) -> str:
        exclude = None if include_timings else {"points": {"__all__": {"report": {"timings"}}}}
        return self.model_dump_json(indent=2, exclude=exclude)
