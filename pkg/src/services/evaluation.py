"""
Synthetic localization experiments.

Each trial draws a ground-truth network, learns rates back from training cascades,
hides a source behind a set of partially observed test cascades and records where the
localizer ranks it.
"""
import logging
import math
from typing import Any, Generator, Iterable, List, Optional, Sequence, Union

import networkx as nx

from ..models.cascade_models import Cascade
from ..models.experiment_models import (
    ExperimentReport,
    SkippedTrial,
    StartTimeEstimate,
    SweepPoint,
    SweepReport,
    TrialRow,
)
from ..models.input_models import TrialConfig
from ..models.network_models import Network
from ..utils.errors import EmptyCandidateSetError, NoObservableNodesError
from ..utils.seeding import derive_seed, make_rng
from .localizer import rank_sources
from .netrate import infer_network
from .simulator import observe, simulate_cascade, simulate_long_cascade
from .stage_tracker import StageTracker, StageUpdate

logger = logging.getLogger(__name__)

RankLike = Union[TrialRow, Optional[int]]

# stream keys under each trial seed
_NETWORK, _TRAIN_SOURCES, _TRAIN_RUNS, _SOURCE_ORDER, _START_TIMES, _TEST_RUNS, _OBSERVE, _SAMPLES = range(8)


def _ranks(results: Iterable[RankLike]) -> List[Optional[int]]:
    ranks = [r.rank if isinstance(r, TrialRow) else r for r in results]
    if not ranks:
        raise ValueError("no trial results to aggregate")
    return ranks


def topk_success(results: Iterable[RankLike], k: int) -> float:
    """
    Share of trials whose true source ranked within the top ``k``.

    Args:
        results: TrialRows or bare ranks; None means the source was not ranked
        k: Cut-off, at least 1

    Raises:
        ValueError: On empty input or k < 1
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    ranks = _ranks(results)
    return sum(1 for rank in ranks if rank is not None and rank <= k) / len(ranks)


def success_probability(results: Iterable[RankLike]) -> float:
    """Share of trials ranking the true source first."""
    return topk_success(results, 1)


def generate_random_network(
    n_nodes: int, edge_density: float, rate_range: Sequence[float], seed: int
) -> Network:
    """Directed G(n, p) graph with rates drawn uniformly from ``rate_range``."""
    graph = nx.gnp_random_graph(n_nodes, edge_density, seed=seed, directed=True)
    pairs = sorted(graph.edges())
    low, high = rate_range
    rates = make_rng(seed).uniform(low, high, size=len(pairs))
    return Network.from_edges(n_nodes, ((s, d, float(r)) for (s, d), r in zip(pairs, rates)))


class ExperimentRunner:
    """Runs every trial of a TrialConfig, reporting progress stage by stage."""

    def __init__(self, config: TrialConfig, network: Optional[Network] = None, max_workers: int = 1):
        """
        Args:
            config: Experiment settings
            network: Fixed ground truth for every trial; drawn per trial when None
            max_workers: Threads used by the Monte-Carlo estimator
        """
        if network is not None and network.n_nodes != config.n_nodes:
            raise ValueError(f"network has {network.n_nodes} nodes, config expects {config.n_nodes}")
        self.config = config
        self.network = network
        self.max_workers = max_workers
        self.tracker = StageTracker(config.n_trials)

    def run_stream(self) -> Generator[StageUpdate, None, None]:
        """
        Run the experiment with progress updates.

        Yields:
            StageUpdate objects; the last one has stage "Complete" and carries the
            ExperimentReport in ``data``
        """
        self.tracker.reset()
        rows: List[TrialRow] = []
        skipped: List[SkippedTrial] = []

        for trial in range(self.config.n_trials):
            try:
                row = yield from self._run_trial(trial)
            except (NoObservableNodesError, EmptyCandidateSetError) as exc:
                logger.warning("trial %d skipped: %s", trial, exc)
                skipped.append(SkippedTrial(trial=trial, reason=str(exc)))
                yield self.tracker.create_update("Skipped", str(exc), trial=trial, status="skipped")
                continue
            rows.append(row)

        report = self._build_report(rows, skipped)
        summary = (
            f"{len(rows)} trials completed, {len(skipped)} skipped; "
            f"success probability {report.success_probability}"
        )
        logger.info(summary)
        yield self.tracker.create_update("Complete", summary, data=report, status="completed")

    def run(self) -> ExperimentReport:
        """Run the experiment without consuming progress updates."""
        report = None
        for update in self.run_stream():
            if update.stage == "Complete" and update.status == "completed":
                report = update.data
        if report is None:
            raise RuntimeError("experiment finished without a report")
        return report

    def _run_trial(self, trial: int) -> Generator[StageUpdate, None, TrialRow]:
        config = self.config
        tracker = self.tracker
        seed = derive_seed(config.master_seed, trial)

        yield tracker.create_update("Ground Truth", "Drawing the ground-truth network...", trial=trial)
        with tracker.time("Ground Truth"):
            truth = self.network
            if truth is None:
                truth = generate_random_network(
                    config.n_nodes, config.edge_density, config.rate_range, derive_seed(seed, _NETWORK)
                )
        yield tracker.create_update(
            "Ground Truth", f"{truth.n_edges} edges over {truth.n_nodes} nodes", trial=trial, status="completed"
        )

        yield tracker.create_update(
            "Training Cascades", f"Simulating {config.n_train_cascades} training cascades...", trial=trial
        )
        with tracker.time("Training Cascades"):
            training = self._training_cascades(truth, seed)
        yield tracker.create_update(
            "Training Cascades",
            f"{sum(len(c.times) for c in training)} infections recorded",
            trial=trial,
            status="completed",
        )

        yield tracker.create_update("Network Inference", "Inferring transmission rates...", trial=trial)
        with tracker.time("Network Inference"):
            inference = infer_network(training, config.window_T, config.solver)
        yield tracker.create_update(
            "Network Inference",
            f"{inference.network.n_edges} edges inferred (loglik {inference.log_likelihood:.4f})",
            trial=trial,
            status="completed",
        )

        yield tracker.create_update("Test Cascades", "Simulating long test cascades...", trial=trial)
        with tracker.time("Test Cascades"):
            source, tests = self._test_cascades(truth, seed, trial)
            observations = [
                observe(cascade, config.regime, config.observed_fraction, derive_seed(seed, _OBSERVE, c))
                for c, cascade in enumerate(tests)
            ]
        yield tracker.create_update(
            "Test Cascades", f"source {source}, {len(tests)} cascades", trial=trial, status="completed"
        )

        yield tracker.create_update("Localization", "Ranking candidate sources...", trial=trial)
        with tracker.time("Localization"):
            ranking = rank_sources(
                inference.network,
                observations,
                config.n_samples,
                derive_seed(seed, _SAMPLES),
                objective=config.objective,
                max_workers=self.max_workers,
            )
        rank = ranking.position(source)
        score = ranking.score_of(source)
        start_times = [
            StartTimeEstimate(
                cascade_id=cascade.cascade_id,
                true_start=cascade.times[source],
                estimated_start=score.start_times.get(cascade.cascade_id) if score else None,
            )
            for cascade in tests
        ]
        yield tracker.create_update(
            "Localization", f"true source ranked {rank if rank else 'absent'}", trial=trial, status="completed"
        )

        return TrialRow(
            trial=trial,
            true_source=source,
            rank=rank,
            n_candidates=ranking.n_candidates,
            n_ranked=len(ranking),
            true_edges=truth.n_edges,
            inferred_edges=inference.network.n_edges,
            inference_converged=inference.converged,
            start_times=start_times,
        )

    def _training_cascades(self, truth: Network, seed: int) -> List[Cascade]:
        config = self.config
        sources = make_rng(seed, _TRAIN_SOURCES).integers(0, config.n_nodes, size=config.n_train_cascades)
        return [
            simulate_cascade(
                truth, int(source), 0.0, config.window_T, derive_seed(seed, _TRAIN_RUNS, i), cascade_id=f"train{i}"
            )
            for i, source in enumerate(sources)
        ]

    def _test_cascades(self, truth: Network, seed: int, trial: int):
        """Pick the first source, in a seeded order, that yields long cascades."""
        config = self.config
        starts = make_rng(seed, _START_TIMES).uniform(
            0.0, config.start_time_spread, size=config.n_test_cascades_per_source
        )
        order = make_rng(seed, _SOURCE_ORDER).permutation(config.n_nodes)
        for source in (int(s) for s in order):
            if not truth.out_edges(source):
                continue
            try:
                cascades = [
                    simulate_long_cascade(
                        truth,
                        source,
                        float(start),
                        config.window_T,
                        derive_seed(seed, _TEST_RUNS, source, c),
                        config.min_cascade_len,
                        config.max_resimulations,
                        cascade_id=f"t{trial}-{c}",
                    )
                    for c, start in enumerate(starts)
                ]
            except NoObservableNodesError:
                continue
            return source, cascades
        raise NoObservableNodesError(
            f"no source produces cascades with >= {config.min_cascade_len} infected nodes"
        )

    def _build_report(self, rows: List[TrialRow], skipped: List[SkippedTrial]) -> ExperimentReport:
        config = self.config
        timings = {stage: round(seconds, 6) for stage, seconds in self.tracker.timings.items()}
        if not rows:
            logger.warning("no trial completed; aggregates are empty")
            return ExperimentReport(config=config, skipped=skipped, timings=timings)

        errors = [e.abs_error for row in rows for e in row.start_times if e.abs_error is not None]
        baseline = {
            k: math.fsum(min(k, row.n_candidates) / row.n_candidates for row in rows if row.n_candidates)
            / len(rows)
            for k in config.k_list
        }
        return ExperimentReport(
            config=config,
            rows=rows,
            skipped=skipped,
            success_probability=success_probability(rows),
            topk_success={k: topk_success(rows, k) for k in config.k_list},
            random_baseline=baseline,
            mean_abs_start_error=math.fsum(errors) / len(errors) if errors else None,
            timings=timings,
        )


def run_experiment(config: TrialConfig, network: Optional[Network] = None, max_workers: int = 1) -> ExperimentReport:
    """Run every trial of ``config``; fully determined by config.master_seed."""
    return ExperimentRunner(config, network=network, max_workers=max_workers).run()


def run_sweep(
    config: TrialConfig,
    field: str,
    values: Sequence[Any],
    network: Optional[Network] = None,
    max_workers: int = 1,
) -> SweepReport:
    """
    Rerun the experiment once per value of one TrialConfig field.

    Raises:
        ValueError: If ``field`` is not a TrialConfig field or a value is invalid
    """
    if field not in TrialConfig.model_fields:
        raise ValueError(f"Unknown TrialConfig field: {field}. Must be one of {list(TrialConfig.model_fields)}")
    points = []
    base = config.model_dump()
    for value in values:
        variant = TrialConfig.model_validate({**base, field: value})
        logger.info("sweep %s=%r", field, value)
        points.append(SweepPoint(value=value, report=run_experiment(variant, network, max_workers)))
    return SweepReport(field=field, points=points)
