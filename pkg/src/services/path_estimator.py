"""
Monte-Carlo estimation of infection times along shortest paths.

Each sample draws one delay per edge from that edge's transmission density. A node's
infection time, relative to its source, is the shortest-path distance in the sampled
graph. Averaging over samples estimates the expected infection time of every observed
node under every candidate source.
"""
import heapq
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse.csgraph import dijkstra

from ..models.estimation_models import DelaySample, ExpectedDistances
from ..models.network_models import Network, NodeId
from ..utils.seeding import make_rng
from ..utils.summation import CompensatedSum
from .transmission import EXPONENTIAL

logger = logging.getLogger(__name__)


def sample_delays(network: Network, master_seed: int, sample_index: int) -> DelaySample:
    """
    Draw one delay per edge.

    The draw depends only on (master_seed, sample_index) and the network's edge set:
    edges are consumed in canonical (src, dst) order, so the order of the input edge
    list does not matter.
    """
    if sample_index < 0:
        raise ValueError(f"sample_index must be non-negative, got {sample_index}")
    rng = make_rng(master_seed, sample_index)
    delays = EXPONENTIAL.sample(network.rates, rng)
    return DelaySample(delays=delays, seed_index=sample_index, master_seed=master_seed)


def shortest_paths_from(network: Network, delays: DelaySample, root: NodeId) -> Dict[NodeId, float]:
    """
    Exact single-source shortest-path distances along directed edges.

    Binary-heap Dijkstra; nodes unreachable from ``root`` are absent from the result.
    """
    if not 0 <= root < network.n_nodes:
        raise ValueError(f"root {root} outside [0, {network.n_nodes})")
    if delays.delays.shape[0] != network.n_edges:
        raise ValueError("delay sample does not match the network's edge count")

    targets = network.dst.tolist()
    weights = delays.delays.tolist()
    distances: Dict[NodeId, float] = {root: 0.0}
    settled = set()
    heap: List[Tuple[float, NodeId]] = [(0.0, root)]

    while heap:
        distance, node = heapq.heappop(heap)
        if node in settled:
            continue
        settled.add(node)
        for edge in network.out_edges(node):
            target = targets[edge]
            candidate = distance + weights[edge]
            if candidate < distances.get(target, math.inf):
                distances[target] = candidate
                heapq.heappush(heap, (candidate, target))

    return distances


def sample_distance_block(
    network: Network,
    delays: DelaySample,
    observed: Sequence[NodeId],
    candidates: Sequence[NodeId],
) -> np.ndarray:
    """
    Distances from each candidate to each observed node in one delay sample.

    Runs one Dijkstra per observed node on the reversed graph, so the cost grows with
    the (small) observed set rather than the candidate set. Each candidate's path is
    then summed again from the candidate end, edge by edge, so the result is bitwise
    what ``shortest_paths_from(candidate)`` reports. Returns an array shaped
    (len(candidates), len(observed)) with +inf where no path exists.
    """
    observed = np.asarray(observed, dtype=np.int64)
    candidates = np.asarray(candidates, dtype=np.int64)
    weights = delays.delays
    distances, predecessors = dijkstra(
        network.reversed_csr(weights), directed=True, indices=observed, return_predecessors=True
    )
    distances = np.atleast_2d(distances)
    predecessors = np.atleast_2d(predecessors)

    block = np.full((candidates.size, observed.size), np.inf)
    for column, root in enumerate(observed.tolist()):
        reachable = np.isfinite(distances[column, candidates])
        node = candidates[reachable]
        total = np.zeros(node.size)
        active = node != root
        # predecessor in the reversed tree = next node on the forward path
        while active.any():
            step = node[active]
            following = predecessors[column, step]
            total[active] = total[active] + weights[network.edge_index(step, following)]
            node[active] = following
            active[active] = following != root
        block[reachable, column] = total
    return block


class _PartialEstimate:
    """Accumulators for a run of samples."""

    def __init__(self, shape):
        self.sums = CompensatedSum(shape)
        self.squares = CompensatedSum(shape)
        self.reach = np.zeros(shape, dtype=np.int64)

    def add(self, block: np.ndarray) -> None:
        reachable = np.isfinite(block)
        self.sums.add(block, reachable)
        self.squares.add(np.where(reachable, block, 0.0) ** 2)
        self.reach += reachable

    def merge(self, other: "_PartialEstimate") -> None:
        self.sums.merge(other.sums)
        self.squares.merge(other.squares)
        self.reach += other.reach


def _run_samples(
    network: Network,
    observed: Sequence[NodeId],
    candidates: Sequence[NodeId],
    sample_indices: Iterable[int],
    master_seed: int,
) -> _PartialEstimate:
    partial = _PartialEstimate((len(candidates), len(observed)))
    for index in sample_indices:
        delays = sample_delays(network, master_seed, index)
        partial.add(sample_distance_block(network, delays, observed, candidates))
    return partial


def estimate_infection_times(
    network: Network,
    observed: Iterable[NodeId],
    candidates: Iterable[NodeId],
    n_samples: int,
    master_seed: int,
    sample_indices: Optional[Sequence[int]] = None,
    max_workers: int = 1,
) -> ExpectedDistances:
    """
    Estimate expected infection times from every candidate to every observed node.

    Samples where an observed node is unreachable from a candidate are excluded from
    that pair's mean; ``reach_count`` records how many samples contributed.

    Args:
        network: Network with learned transmission rates
        observed: Observed nodes of one cascade
        candidates: Candidate sources, disjoint from ``observed``
        n_samples: Number of Monte-Carlo delay samples
        master_seed: Seed of the sample stream
        sample_indices: Explicit sample indices (in accumulation order); defaults to
            range(n_samples)
        max_workers: Threads used to process sample chunks

    Returns:
        ExpectedDistances over sorted candidates and observed nodes
    """
    observed = sorted(set(observed))
    candidates = sorted(set(candidates))
    if not observed:
        raise ValueError("observed set is empty")
    if not candidates:
        raise ValueError("candidate set is empty")
    if set(observed) & set(candidates):
        raise ValueError("observed and candidate sets must be disjoint")
    for node in observed + candidates:
        if not 0 <= node < network.n_nodes:
            raise ValueError(f"node {node} outside [0, {network.n_nodes})")
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")

    indices = list(range(n_samples)) if sample_indices is None else list(sample_indices)
    if len(indices) != n_samples:
        raise ValueError("sample_indices must contain exactly n_samples entries")

    if max_workers > 1 and n_samples > 1:
        chunks = np.array_split(np.asarray(indices), max_workers)
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            partials = list(
                pool.map(
                    lambda chunk: _run_samples(network, observed, candidates, chunk.tolist(), master_seed),
                    chunks,
                )
            )
        # reduce in chunk order
        estimate = partials[0]
        for partial in partials[1:]:
            estimate.merge(partial)
    else:
        estimate = _run_samples(network, observed, candidates, indices, master_seed)

    reach = estimate.reach
    totals = estimate.sums.value()
    squares = estimate.squares.value()
    with np.errstate(divide="ignore", invalid="ignore"):
        t_hat = np.where(reach > 0, totals / reach, np.inf)
        variance = np.where(reach > 1, (squares - reach * t_hat ** 2) / (reach - 1), np.nan)
        std_error = np.where(reach > 1, np.sqrt(np.maximum(variance, 0.0) / reach), np.nan)

    unreachable = int(np.sum(reach == 0))
    if unreachable:
        logger.debug("%d (candidate, observed) pairs never reachable over %d samples", unreachable, n_samples)

    return ExpectedDistances(
        candidates=tuple(candidates),
        observed=tuple(observed),
        t_hat=t_hat,
        reach_count=reach,
        std_error=std_error,
        n_samples=n_samples,
    )
