"""
Continuous-time independent cascade simulation and partial observation.

A cascade is generated from the shortest-path view of the model: one delay is drawn
per edge and each node is infected at t_start plus its shortest-path distance from the
source. Nodes whose time falls past the observation window stay ignorant.
"""
import logging
import math
from typing import List, Optional

from ..models.cascade_models import Cascade, PartialObservation
from ..models.input_models import ObservationRegime
from ..models.network_models import Network, NodeId
from ..utils.errors import NoObservableNodesError
from ..utils.seeding import derive_seed, make_rng
from .path_estimator import sample_delays, shortest_paths_from

logger = logging.getLogger(__name__)


def simulate_cascade(
    network: Network,
    source: NodeId,
    t_start: float,
    window_T: float,
    seed: int,
    cascade_id: str = "",
) -> Cascade:
    """
    Simulate one cascade started by ``source`` at ``t_start``.

    The delays are ``sample_delays(network, seed, 0)``, so infection times equal
    t_start + shortest_paths_from(...) on that sample exactly.

    Args:
        network: Ground-truth network
        source: Node that starts the propagation
        t_start: Infection time of the source
        window_T: Length of the observation window after t_start
        seed: Seed fully determining the run
        cascade_id: Identifier stored on the cascade

    Returns:
        Cascade with horizon t_start + window_T
    """
    if not 0 <= source < network.n_nodes:
        raise ValueError(f"source {source} outside [0, {network.n_nodes})")
    if not window_T > 0:
        raise ValueError(f"window_T must be positive, got {window_T}")
    if not t_start >= 0:
        raise ValueError(f"t_start must be non-negative, got {t_start}")

    horizon = t_start + window_T
    delays = sample_delays(network, seed, 0)
    distances = shortest_paths_from(network, delays, source)
    times = {}
    for node, distance in distances.items():
        time = t_start + distance
        if time <= horizon:
            times[node] = time

    return Cascade(
        cascade_id=cascade_id,
        n_nodes=network.n_nodes,
        times=times,
        window_T=horizon,
        source=source,
    )


def simulate_cascades(
    network: Network,
    source: NodeId,
    t_start: float,
    window_T: float,
    count: int,
    seed: int,
    id_prefix: str = "c",
) -> List[Cascade]:
    """Simulate ``count`` independent cascades; run i uses seed derive_seed(seed, i)."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    return [
        simulate_cascade(
            network, source, t_start, window_T, derive_seed(seed, i), cascade_id=f"{id_prefix}{i}"
        )
        for i in range(count)
    ]


def simulate_long_cascade(
    network: Network,
    source: NodeId,
    t_start: float,
    window_T: float,
    seed: int,
    min_len: int,
    max_attempts: int,
    cascade_id: str = "",
) -> Cascade:
    """
    Resimulate until at least ``min_len`` nodes are infected.

    Raises:
        NoObservableNodesError: If no attempt reaches ``min_len`` within ``max_attempts``
    """
    for attempt in range(max_attempts):
        cascade = simulate_cascade(
            network, source, t_start, window_T, derive_seed(seed, attempt), cascade_id=cascade_id
        )
        if len(cascade.times) >= min_len:
            if attempt:
                logger.debug("cascade %s reached %d nodes after %d retries", cascade_id, len(cascade.times), attempt)
            return cascade
    raise NoObservableNodesError(
        f"source {source} produced no cascade with >= {min_len} infected nodes in {max_attempts} attempts"
    )


def observed_count(fraction: float, n_infected: int) -> int:
    """Ceiling of fraction * n_infected, robust to binary rounding (0.1 * 30 -> 3)."""
    return math.ceil(round(fraction * n_infected, 9))


def _check_fraction(fraction: float) -> None:
    if not 0 < fraction <= 1:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")


def _observable(cascade: Cascade) -> List[NodeId]:
    source = cascade.root
    pool = [node for node in cascade.times if node != source]
    if not pool:
        raise NoObservableNodesError(
            f"no observable nodes in cascade {cascade.cascade_id!r}: only the source is infected"
        )
    return pool


def observe_random(cascade: Cascade, fraction: float, seed: int) -> PartialObservation:
    """Observe a uniform random ceil(fraction * #infected) infected nodes, never the source."""
    _check_fraction(fraction)
    pool = sorted(_observable(cascade))
    count = min(observed_count(fraction, len(cascade.times)), len(pool))
    rng = make_rng(seed)
    chosen = rng.choice(len(pool), size=count, replace=False)
    observed = {pool[i]: cascade.times[pool[i]] for i in sorted(chosen)}
    return PartialObservation.from_observed(cascade.n_nodes, observed, cascade.cascade_id)


def observe_final(cascade: Cascade, fraction: float) -> PartialObservation:
    """
    Observe the ceil(fraction * #infected) latest-infected nodes, never the source.

    Nodes are ordered by (time, id); the last ones are observed, so ties keep the
    highest ids.
    """
    _check_fraction(fraction)
    pool = _observable(cascade)
    count = min(observed_count(fraction, len(cascade.times)), len(pool))
    ordered = sorted(pool, key=lambda node: (cascade.times[node], node))
    observed = {node: cascade.times[node] for node in ordered[len(ordered) - count:]}
    return PartialObservation.from_observed(cascade.n_nodes, observed, cascade.cascade_id)


def observe(
    cascade: Cascade,
    regime: ObservationRegime,
    fraction: float,
    seed: Optional[int] = None,
) -> PartialObservation:
    """Observe ``cascade`` under the given regime; ``seed`` is required for random."""
    if regime is ObservationRegime.RANDOM:
        if seed is None:
            raise ValueError("random observation needs a seed")
        return observe_random(cascade, fraction, seed)
    return observe_final(cascade, fraction)
