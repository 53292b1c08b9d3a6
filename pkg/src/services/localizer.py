"""
Source localization by least squares over estimated infection times.

For a candidate source, every observed node i of a cascade should satisfy
t_i ~= t_hat_i + t_s, where t_hat_i is the expected path time from the candidate and
t_s the unknown start time. The best t_s is the difference of the two means; the
candidate's score is the residual sum of squares at that t_s, summed over cascades.
"""
import logging
import math
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from ..models.cascade_models import PartialObservation
from ..models.estimation_models import ExpectedDistances
from ..models.input_models import ScoringObjective
from ..models.network_models import Network, NodeId
from ..models.ranking_models import CandidateScore, Ranking
from ..utils.errors import EmptyCandidateSetError, InadmissibleCandidateError
from .path_estimator import estimate_infection_times

logger = logging.getLogger(__name__)

ExpectedTimes = Union[ExpectedDistances, Mapping[NodeId, float]]


def _times_for(candidate: NodeId, t_hat: ExpectedTimes) -> Mapping[NodeId, float]:
    if isinstance(t_hat, ExpectedDistances):
        return t_hat.as_mapping(candidate)
    return t_hat


def estimate_start_time(
    candidate: NodeId, observation: PartialObservation, t_hat: ExpectedTimes
) -> float:
    """
    Start time minimizing sum_i (t_i - t_hat_i - t_s)^2 over the observed nodes.

    Raises:
        InadmissibleCandidateError: If some observed node has no finite expected time
    """
    expected = _times_for(candidate, t_hat)
    observed_times = []
    expected_times = []
    for node, time in observation.observed.items():
        estimate = expected.get(node)
        if estimate is None or not math.isfinite(estimate):
            raise InadmissibleCandidateError(candidate, observation.cascade_id)
        observed_times.append(time)
        expected_times.append(estimate)
    k = len(observed_times)
    return math.fsum(observed_times) / k - math.fsum(expected_times) / k


def squared_residuals(
    observation: PartialObservation, expected: Mapping[NodeId, float], start_time: float
) -> List[float]:
    return [(expected[node] + start_time - time) ** 2 for node, time in observation.observed.items()]


def score_candidate(
    candidate: NodeId,
    cascade_set: Sequence[Tuple[PartialObservation, ExpectedTimes]],
    objective: ScoringObjective = ScoringObjective.SSE,
    cascade_keys: Optional[Sequence[str]] = None,
) -> CandidateScore:
    """
    Score ``candidate`` over a set of (observation, expected times) cascades.

    Cascades where the candidate cannot reach every observed node are skipped; the
    skipped pairs lower ``coverage``.
    """
    if not cascade_set:
        raise ValueError("cascade_set must not be empty")
    keys = list(cascade_keys) if cascade_keys is not None else _cascade_keys(o for o, _ in cascade_set)

    contributions: List[float] = []
    start_times: Dict[str, float] = {}
    total_pairs = 0
    reachable_pairs = 0

    for key, (observation, t_hat) in zip(keys, cascade_set):
        expected = _times_for(candidate, t_hat)
        total_pairs += observation.k
        reachable_pairs += sum(
            1 for node in observation.observed
            if expected.get(node) is not None and math.isfinite(expected[node])
        )
        try:
            start_time = estimate_start_time(candidate, observation, expected)
        except InadmissibleCandidateError:
            continue
        residuals = math.fsum(squared_residuals(observation, expected, start_time))
        if objective is ScoringObjective.MSE:
            residuals /= observation.k
        contributions.append(residuals)
        start_times[key] = start_time

    return CandidateScore(
        candidate=candidate,
        sse=math.fsum(contributions),
        start_times=start_times,
        coverage=reachable_pairs / total_pairs,
        admissible_cascades=len(contributions),
    )


def _cascade_keys(observations) -> List[str]:
    """Cascade ids keying the start times; they must be non-empty and distinct."""
    ids = [o.cascade_id for o in observations]
    if not all(ids):
        raise ValueError("every cascade in a set needs a non-empty cascade_id")
    if len(set(ids)) != len(ids):
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        raise ValueError(f"duplicate cascade ids in the set: {duplicates}")
    return ids


def candidate_pool(n_nodes: int, cascade_set: Sequence[PartialObservation]) -> List[NodeId]:
    """Nodes observed in none of the cascades."""
    observed = set().union(*(o.observed for o in cascade_set))
    return [node for node in range(n_nodes) if node not in observed]


def rank_sources(
    network: Network,
    cascade_set: Sequence[PartialObservation],
    n_samples: int,
    master_seed: int,
    objective: ScoringObjective = ScoringObjective.SSE,
    max_workers: int = 1,
) -> Ranking:
    """
    Rank every hidden candidate as the common source of a cascade set.

    Every cascade is estimated with the same sample stream (master_seed), so the
    ranking does not depend on the order of the cascades.

    Args:
        network: Network with inferred transmission rates
        cascade_set: Partial observations believed to share one source
        n_samples: Monte-Carlo samples per cascade
        master_seed: Seed of the delay samples
        objective: Residual aggregate to minimize
        max_workers: Threads used by the estimator

    Returns:
        Ranking of the candidates admissible in at least one cascade

    Raises:
        EmptyCandidateSetError: If every node is observed somewhere in the set
        ValueError: On an empty set, a size mismatch, or empty or repeated cascade ids
    """
    cascade_set = list(cascade_set)
    if not cascade_set:
        raise ValueError("cascade_set must not be empty")
    for observation in cascade_set:
        if observation.n_nodes != network.n_nodes:
            raise ValueError(
                f"observation {observation.cascade_id!r} covers {observation.n_nodes} nodes, "
                f"network has {network.n_nodes}"
            )

    keys = _cascade_keys(cascade_set)

    candidates = candidate_pool(network.n_nodes, cascade_set)
    if not candidates:
        raise EmptyCandidateSetError("every node is observed in some cascade; no hidden candidate remains")

    estimates = [
        estimate_infection_times(
            network, observation.observed, candidates, n_samples, master_seed, max_workers=max_workers
        )
        for observation in cascade_set
    ]
    pairs = list(zip(cascade_set, estimates))
    scores = [score_candidate(candidate, pairs, objective, keys) for candidate in candidates]

    ranking = Ranking.from_scores(scores, objective, len(candidates))
    excluded = len(candidates) - len(ranking)
    if excluded:
        logger.warning("%d of %d candidates reach no cascade's observed nodes and are not ranked",
                       excluded, len(candidates))
    return ranking
