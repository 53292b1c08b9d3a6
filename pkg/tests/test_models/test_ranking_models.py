"""
Tests for candidate scores and ranking order.
"""
import pytest
from pydantic import ValidationError

from src.models.input_models import ScoringObjective
from src.models.ranking_models import CandidateScore, Ranking


def _score(candidate, sse, coverage=1.0, admissible=1):
    return CandidateScore(candidate=candidate, sse=sse, coverage=coverage, admissible_cascades=admissible)


def test_ranking_orders_by_sse_then_coverage_then_id():
    scores = [_score(4, 1.0), _score(2, 0.5, 0.5), _score(3, 0.5, 1.0), _score(1, 0.5, 1.0)]
    ranking = Ranking.from_scores(scores, ScoringObjective.SSE, 10)
    assert [s.candidate for s in ranking.scores] == [1, 3, 2, 4]
    assert ranking.position(2) == 3
    assert ranking.position(9) is None
    assert [s.candidate for s in ranking.top(2)] == [1, 3]


def test_inadmissible_candidates_are_dropped():
    ranking = Ranking.from_scores([_score(0, 0.0, 0.0, 0), _score(1, 2.0)], ScoringObjective.SSE, 2)
    assert len(ranking) == 1
    assert ranking.score_of(0) is None
    assert ranking.n_candidates == 2


@pytest.mark.parametrize("sse, coverage", [(-0.1, 1.0), (1.0, 1.5), (1.0, -0.1)])
def test_score_bounds(sse, coverage):
    with pytest.raises(ValidationError):
        CandidateScore(candidate=0, sse=sse, coverage=coverage)
