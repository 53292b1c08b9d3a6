"""
Transmission-rate inference from fully observed cascades.

The exponential-delay cascade log-likelihood is concave in the rates and separates
over destination nodes: node i's term only involves the rates alpha[j, i] of its
incoming edges. Each destination is solved independently by projected gradient ascent
with a backtracking (Armijo) line search, its steps scaled by the diagonal of
the negated Hessian.
"""
import logging
import math
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from ..models.cascade_models import Cascade
from ..models.inference_models import InferenceResult, NodeSolution, RateMatrix, SolverConfig
from ..models.network_models import NodeId
from ..utils.errors import DegenerateLikelihoodError
from .transmission import EXPONENTIAL, TransmissionModel

logger = logging.getLogger(__name__)

Pair = Tuple[NodeId, NodeId]

_MIN_CURVATURE = 1e-12


def _check_window(cascades: Iterable[Cascade], window_T: float) -> None:
    if not window_T > 0:
        raise ValueError(f"window_T must be positive, got {window_T}")
    for cascade in cascades:
        latest = max(cascade.times.values())
        if latest > window_T:
            raise ValueError(
                f"cascade {cascade.cascade_id!r} has an infection at {latest} past window_T={window_T}"
            )


def cascade_loglik(
    alpha: RateMatrix, cascade: Cascade, window_T: float, model: TransmissionModel = EXPONENTIAL
) -> float:
    """
    Log-likelihood of one fully observed cascade.

    Every infected node i with earlier-infected nodes contributes
    -sum_k alpha[k, i] (t_i - t_k) + log sum_k alpha[k, i]; the earliest node has no
    potential parent and contributes no hazard term. Every infected node i contributes
    -alpha[i, m] (T - t_i) for each ignorant node m. These are the exponential forms of
    ``model``'s log-survival and hazard.

    Returns:
        The log-likelihood, or -inf when a non-root infected node has zero total hazard
    """
    _check_window([cascade], window_T)
    items = cascade.sorted_items()
    total = 0.0

    for position, (node, time) in enumerate(items):
        hazard = 0.0
        has_parent = False
        for parent, parent_time in items[:position]:
            if parent_time >= time:
                break
            has_parent = True
            rate = alpha.get(parent, node)
            total += model.log_survival(time - parent_time, rate)
            hazard += model.hazard(time - parent_time, rate)
        if has_parent:
            if hazard <= 0:
                return -math.inf
            total += math.log(hazard)

    times = cascade.times
    for (src, dst), rate in alpha.alpha.items():
        if src in times and dst not in times:
            total += model.log_survival(window_T - times[src], rate)
    return total


def _parent_hazards(alpha: RateMatrix, cascade: Cascade) -> Dict[NodeId, float]:
    """Total incoming hazard of every infected node that has potential parents."""
    items = cascade.sorted_items()
    hazards = {}
    for position, (node, time) in enumerate(items):
        earlier = [parent for parent, parent_time in items[:position] if parent_time < time]
        if earlier:
            hazards[node] = sum(alpha.get(parent, node) for parent in earlier)
    return hazards


def loglik_gradient(
    alpha: RateMatrix, cascades: Sequence[Cascade], window_T: float
) -> Dict[Pair, float]:
    """
    Gradient of the summed log-likelihood with respect to every pair in ``alpha``.

    Raises:
        DegenerateLikelihoodError: Where the log-likelihood is -inf
    """
    _check_window(cascades, window_T)
    gradient = {pair: 0.0 for pair in alpha.alpha}

    for cascade in cascades:
        times = cascade.times
        hazards = _parent_hazards(alpha, cascade)
        for node, hazard in hazards.items():
            if hazard <= 0:
                raise DegenerateLikelihoodError(
                    f"node {node} has zero incoming hazard in cascade {cascade.cascade_id!r}"
                )
        for (src, dst) in gradient:
            if src not in times:
                continue
            if dst in times:
                if times[src] < times[dst]:
                    gradient[(src, dst)] += -(times[dst] - times[src]) + 1.0 / hazards[dst]
            else:
                gradient[(src, dst)] -= window_T - times[src]
    return gradient


def candidate_pairs(cascades: Iterable[Cascade]) -> Set[Pair]:
    """Ordered pairs (j, i) with j infected strictly before i in some cascade."""
    pairs: Set[Pair] = set()
    for cascade in cascades:
        items = cascade.sorted_items()
        for position, (node, time) in enumerate(items):
            for parent, parent_time in items[:position]:
                if parent_time < time:
                    pairs.add((parent, node))
    return pairs


class NodeProblem:
    """
    Concave subproblem over the incoming rates of one destination node.

    The objective is -linear . a + sum_r log(rows[r] . a), where each row marks the
    potential parents of the node in one cascade that infected it.
    """

    def __init__(self, node: NodeId, parents: List[NodeId], rows: np.ndarray, linear: np.ndarray):
        self.node = node
        self.parents = parents
        self.rows = rows
        self.linear = linear

    @property
    def size(self) -> int:
        return len(self.parents)

    def objective(self, rates: np.ndarray) -> float:
        value = -float(self.linear @ rates)
        if self.rows.shape[0]:
            hazards = self.rows @ rates
            if np.any(hazards <= 0):
                return -math.inf
            value += float(np.sum(np.log(hazards)))
        return value

    def gradient(self, rates: np.ndarray) -> np.ndarray:
        grad = -self.linear.copy()
        if self.rows.shape[0]:
            hazards = self.rows @ rates
            if np.any(hazards <= 0):
                raise DegenerateLikelihoodError(f"node {self.node} has zero incoming hazard")
            grad += self.rows.T @ (1.0 / hazards)
        return grad

    def curvature(self, rates: np.ndarray) -> np.ndarray:
        """Diagonal of the negated Hessian, floored away from zero."""
        if not self.rows.shape[0]:
            return np.full(self.size, _MIN_CURVATURE)
        hazards = self.rows @ rates
        return np.maximum(self.rows.T @ (1.0 / hazards ** 2), _MIN_CURVATURE)


def build_node_problem(
    cascades: Sequence[Cascade],
    node: NodeId,
    window_T: float,
    pairs: Optional[Set[Pair]] = None,
) -> NodeProblem:
    """Collect the likelihood terms that involve the incoming rates of ``node``."""
    if pairs is None:
        pairs = candidate_pairs(cascades)
    parents = sorted(src for (src, dst) in pairs if dst == node)
    index = {parent: k for k, parent in enumerate(parents)}
    linear = np.zeros(len(parents))
    rows: List[np.ndarray] = []

    for cascade in cascades:
        times = cascade.times
        if node in times:
            time = times[node]
            row = np.zeros(len(parents))
            for parent, k in index.items():
                parent_time = times.get(parent)
                if parent_time is not None and parent_time < time:
                    row[k] = 1.0
                    linear[k] += time - parent_time
            if row.any():
                rows.append(row)
        else:
            for parent, k in index.items():
                parent_time = times.get(parent)
                if parent_time is not None:
                    linear[k] += window_T - parent_time

    matrix = np.vstack(rows) if rows else np.zeros((0, len(parents)))
    return NodeProblem(node, parents, matrix, linear)


def solve_node(
    problem: NodeProblem, config: SolverConfig, initial: Optional[np.ndarray] = None
) -> NodeSolution:
    """
    Diagonally scaled projected gradient ascent on one destination subproblem.

    Each step moves along grad / curvature, clips at zero and backtracks until the
    Armijo condition holds. A step of 1 is a Newton step on the diagonal model.
    """
    rates = np.full(problem.size, config.initial_rate) if initial is None else np.array(initial, dtype=float)
    value = problem.objective(rates)
    if not math.isfinite(value):
        logger.warning("node %d: initial rates give -inf likelihood, restarting from %.3g",
                       problem.node, config.initial_rate)
        rates = np.full(problem.size, config.initial_rate)
        value = problem.objective(rates)

    history = [value]
    step = config.step_size
    converged = False
    iterations = 0

    for _ in range(config.max_iters):
        grad = problem.gradient(rates)
        direction = grad / problem.curvature(rates)
        accepted = False
        for _ in range(config.max_backtracks):
            trial = np.maximum(rates + step * direction, 0.0)
            trial_value = problem.objective(trial)
            if trial_value >= value + config.armijo * float(grad @ (trial - rates)):
                accepted = True
                break
            step *= 0.5
        if not accepted:
            # no ascent step left at machine precision
            converged = True
            break

        change = trial_value - value
        rates, value = trial, trial_value
        history.append(value)
        iterations += 1
        if abs(change) <= config.tolerance * max(1.0, abs(value)):
            converged = True
            break
        step = min(2.0 * step, max(1.0, config.step_size))

    logger.debug("node %d: %d iterations, loglik %.6f", problem.node, iterations, value)
    return NodeSolution(
        node=problem.node,
        parents=problem.parents,
        rates=rates.tolist(),
        log_likelihood=value,
        iterations=iterations,
        converged=converged,
        history=history,
    )


def infer_network(
    cascades: Sequence[Cascade],
    window_T: float,
    config: SolverConfig,
    initial: Optional[RateMatrix] = None,
) -> InferenceResult:
    """
    Infer transmission rates by maximizing the summed cascade log-likelihood.

    Args:
        cascades: Fully observed training cascades over one network
        window_T: Observation horizon shared by the cascades
        config: Solver settings
        initial: Optional starting rates; missing pairs start at config.initial_rate

    Returns:
        InferenceResult whose network keeps edges with rate > config.prune_threshold.
        Subproblems that hit max_iters keep their best iterate and are reported in
        ``warnings``.
    """
    cascades = list(cascades)
    if not cascades:
        raise ValueError("infer_network needs at least one cascade")
    n_nodes = cascades[0].n_nodes
    if any(c.n_nodes != n_nodes for c in cascades):
        raise ValueError("all cascades must share one network size")
    _check_window(cascades, window_T)

    seen = set().union(*(c.times for c in cascades))
    if len(seen) < n_nodes:
        logger.warning("%d of %d nodes never appear in a training cascade", n_nodes - len(seen), n_nodes)

    pairs = candidate_pairs(cascades)
    alpha: Dict[Pair, float] = {}
    solutions: Dict[NodeId, NodeSolution] = {}
    warnings: List[str] = []

    for node in range(n_nodes):
        problem = build_node_problem(cascades, node, window_T, pairs)
        if not problem.size:
            continue
        start = None
        if initial is not None:
            start = np.array([
                initial.alpha.get((parent, node), config.initial_rate) for parent in problem.parents
            ])
        solution = solve_node(problem, config, start)
        solutions[node] = solution
        if not solution.converged:
            message = (f"node {node}: no convergence within {config.max_iters} iterations; "
                       f"keeping best iterate (loglik {solution.log_likelihood:.6f})")
            warnings.append(message)
            logger.warning(message)
        for parent, rate in zip(solution.parents, solution.rates):
            alpha[(parent, node)] = rate

    rates = RateMatrix(n_nodes=n_nodes, alpha=alpha)
    network = rates.to_network(config.prune_threshold)
    log_likelihood = math.fsum(s.log_likelihood for s in solutions.values())
    logger.info(
        "inferred %d edges from %d cascades (loglik %.4f)", network.n_edges, len(cascades), log_likelihood
    )
    return InferenceResult(
        network=network,
        rates=rates,
        log_likelihood=log_likelihood,
        iterations=max((s.iterations for s in solutions.values()), default=0),
        total_iterations=sum(s.iterations for s in solutions.values()),
        converged=not warnings,
        warnings=warnings,
        node_solutions=solutions,
    )


def total_loglik(alpha: RateMatrix, cascades: Sequence[Cascade], window_T: float) -> float:
    """Sum of cascade log-likelihoods."""
    return math.fsum(cascade_loglik(alpha, cascade, window_T) for cascade in cascades)
