"""
Progress updates and per-stage wall-clock timings for experiment runs.
"""
import time
from contextlib import contextmanager
from typing import Any, Dict, Iterator, Optional


class StageUpdate:
    """Represents a single progress update."""

    def __init__(
        self,
        stage: str,
        trial: Optional[int],
        message: str,
        progress: float,
        data: Optional[Any] = None,
        status: str = "in_progress",
    ):
        self.stage = stage
        self.trial = trial
        self.message = message
        self.progress = progress
        self.data = data
        self.status = status


class StageTracker:
    """Tracks progress through the pipeline stages of every trial."""

    STAGES = [
        "Ground Truth",
        "Training Cascades",
        "Network Inference",
        "Test Cascades",
        "Localization",
    ]

    def __init__(self, n_trials: int = 1):
        self.n_trials = max(1, n_trials)
        self.current_trial = 0
        self.current_stage_index = 0
        self.timings: Dict[str, float] = {stage: 0.0 for stage in self.STAGES}

    def create_update(
        self,
        stage: str,
        message: str,
        trial: Optional[int] = None,
        data: Optional[Any] = None,
        status: str = "in_progress",
    ) -> StageUpdate:
        """
        Create a progress update.

        Args:
            stage: Stage name; names outside STAGES keep the current stage index
            message: Human-readable description
            trial: Trial the update belongs to
            data: Optional payload (the final report on completion)
            status: in_progress, completed, skipped or error

        Returns:
            StageUpdate object
        """
        if stage in self.STAGES:
            self.current_stage_index = self.STAGES.index(stage)
        if trial is not None:
            self.current_trial = trial

        total = self.n_trials * len(self.STAGES)
        if stage == "Complete":
            done = total
        elif status == "skipped":
            done = (self.current_trial + 1) * len(self.STAGES)
        else:
            done = self.current_trial * len(self.STAGES) + self.current_stage_index
            if status == "completed":
                done += 1
        progress = min(100.0, 100.0 * done / total)

        return StageUpdate(
            stage=stage,
            trial=trial,
            message=message,
            progress=progress,
            data=data,
            status=status,
        )

    @contextmanager
    def time(self, stage: str) -> Iterator[None]:
        """Add the wall-clock time of the block to ``stage``."""
        started = time.perf_counter()
        try:
            yield
        finally:
            self.timings[stage] = self.timings.get(stage, 0.0) + time.perf_counter() - started

    def reset(self):
        """Reset tracker state."""
        self.current_trial = 0
        self.current_stage_index = 0
        self.timings = {stage: 0.0 for stage in self.STAGES}
