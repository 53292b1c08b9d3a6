"""
Command-line entry point: simulate, infer, locate, evaluate and ingest.
"""
import argparse
import logging
import sys
from enum import IntEnum
from pathlib import Path
from typing import List, Optional, Sequence

import yaml

from ..config.experiment_presets import EXPERIMENT_PRESETS, get_preset, load_trial_config
from ..config.settings import settings
from ..models.input_models import ObservationRegime, ScoringObjective
from ..services.evaluation import ExperimentRunner, run_sweep
from ..services.localizer import rank_sources
from ..services.netrate import infer_network
from ..services.report_export import render_markdown, render_sweep_markdown
from ..services.simulator import observe, simulate_cascades
from ..utils.errors import CascadeFormatError
from ..utils.log_setup import configure_logging
from ..utils.seeding import derive_seed
from .formats import (
    format_ranking_file,
    parse_cascade_file,
    parse_network_file,
    parse_observation_file,
    write_cascade_file,
    write_network_file,
    write_ranking_file,
)
from .ingest import ingest_to_file

logger = logging.getLogger(__name__)


class ExitCode(IntEnum):
    OK = 0
    USAGE = 2
    MISSING_FILE = 3
    PARSE_ERROR = 4
    INVALID_VALUE = 5
    RUNTIME_ERROR = 6


class UsageError(Exception):
    """Conflicting or incomplete command-line flags."""


def _say(args: argparse.Namespace, text: str) -> None:
    if not args.quiet:
        print(text)


def cmd_simulate(args: argparse.Namespace) -> None:
    network = parse_network_file(args.network)
    cascades = simulate_cascades(network, args.source, args.t_start, args.window, args.count, args.seed)
    write_cascade_file(args.out, cascades, network.n_nodes)
    sizes = [len(c.times) for c in cascades]
    _say(args, f"wrote {len(cascades)} cascades to {args.out} (infected: min {min(sizes)}, max {max(sizes)})")


def cmd_infer(args: argparse.Namespace) -> None:
    data = parse_cascade_file(args.cascades, window_T=args.window)
    if not data.cascades:
        raise ValueError(f"{args.cascades} holds no cascades")
    config = settings.get_solver_config(
        max_iters=args.max_iters, tolerance=args.tol, prune_threshold=args.prune, step_size=args.step_size
    )
    result = infer_network(data.cascades, data.window_T, config)
    write_network_file(args.out, result.network)
    if args.report:
        Path(args.report).write_text(
            result.model_dump_json(indent=2, exclude={"network", "rates"}), encoding="utf-8"
        )
    _say(args, (
        f"inferred {result.network.n_edges} edges from {len(data.cascades)} cascades; "
        f"loglik {result.log_likelihood:.6f}, iterations max {result.iterations} / total {result.total_iterations}, "
        f"converged: {'yes' if result.converged else 'no'}"
    ))
    for warning in result.warnings:
        _say(args, f"  warning: {warning}")


def cmd_locate(args: argparse.Namespace) -> None:
    if args.pre_observed and (args.observed_fraction is not None or args.regime is not None):
        raise UsageError("--pre-observed cannot be combined with --observed-fraction or --regime")
    if args.top < 1:
        raise ValueError(f"--top must be >= 1, got {args.top}")

    network = parse_network_file(args.network)
    if args.pre_observed:
        labels, observations, n_nodes = parse_observation_file(args.cascades)
    else:
        data = parse_cascade_file(args.cascades)
        labels, n_nodes = data.labels, data.n_nodes
        fraction = args.observed_fraction if args.observed_fraction is not None else settings.DEFAULT_OBSERVED_FRACTION
        regime = ObservationRegime(args.regime or ObservationRegime.RANDOM.value)
        observations = [
            observe(cascade, regime, fraction, derive_seed(args.seed, i)) for i, cascade in enumerate(data.cascades)
        ]
    if not observations:
        raise ValueError(f"{args.cascades} holds no cascades")
    if n_nodes != network.n_nodes:
        raise ValueError(f"cascade file covers {n_nodes} nodes, network has {network.n_nodes}")

    ranking = rank_sources(
        network,
        observations,
        args.samples,
        args.seed,
        objective=ScoringObjective(args.objective),
        max_workers=args.workers,
    )
    if args.out:
        write_ranking_file(args.out, ranking, args.top, labels)
    _say(args, format_ranking_file(ranking, args.top, labels).rstrip("\n"))


def cmd_evaluate(args: argparse.Namespace) -> None:
    if args.config:
        config = load_trial_config(args.config)
    else:
        config = get_preset(args.preset)
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.trials is not None:
        overrides["n_trials"] = args.trials
    if overrides:
        config = type(config).model_validate({**config.model_dump(), **overrides})

    if args.sweep:
        if not args.values:
            raise UsageError("--sweep needs --values")
        values = [yaml.safe_load(v) for v in args.values.split(",")]
        sweep = run_sweep(config, args.sweep, values, max_workers=args.workers)
        if args.out:
            Path(args.out).write_text(sweep.report_json(args.include_timings), encoding="utf-8")
        markdown = render_sweep_markdown(sweep)
    else:
        if args.values:
            raise UsageError("--values needs --sweep")
        runner = ExperimentRunner(config, max_workers=args.workers)
        report = None
        for update in runner.run_stream():
            logger.debug("[%5.1f%%] %s: %s", update.progress, update.stage, update.message)
            if update.stage == "Complete":
                report = update.data
        if args.out:
            Path(args.out).write_text(report.report_json(args.include_timings), encoding="utf-8")
        markdown = render_markdown(report, include_timings=args.include_timings)

    if args.markdown:
        Path(args.markdown).write_text(markdown, encoding="utf-8")
    _say(args, markdown.rstrip("\n"))


def cmd_ingest(args: argparse.Namespace) -> None:
    data = ingest_to_file(args.input, args.out, args.time_scale, args.window)
    _say(args, f"wrote {len(data.cascades)} cascades over {data.n_nodes} nodes to {args.out}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="Log at DEBUG level")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="Suppress summaries; log warnings only")

    parser = argparse.ArgumentParser(
        prog="source-locator",
        description="Cascade source localization with learned transmission rates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="Simulate cascades on a network")
    p.add_argument("--network", required=True, help="NetworkFile")
    p.add_argument("--source", required=True, type=int, help="Source node id")
    p.add_argument("--t-start", type=float, default=0.0, help="Infection time of the source")
    p.add_argument("--window", type=float, default=settings.DEFAULT_WINDOW, help="Observation window length")
    p.add_argument("--count", type=int, default=1, help="Number of cascades")
    p.add_argument("--seed", type=int, default=0, help="Random seed")
    p.add_argument("--out", required=True, help="Output CascadeFile")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("infer", parents=[common], help="Infer transmission rates from cascades")
    p.add_argument("--cascades", required=True, help="CascadeFile of full cascades")
    p.add_argument("--window", type=float, default=None, help="Observation horizon (default: file header)")
    p.add_argument("--max-iters", type=int, default=None, help="Iteration cap per node")
    p.add_argument("--tol", type=float, default=None, help="Relative convergence tolerance")
    p.add_argument("--prune", type=float, default=None, help="Drop rates at or below this")
    p.add_argument("--step-size", type=float, default=None, help="Initial line-search step")
    p.add_argument("--report", default=None, help="Write convergence details as JSON")
    p.add_argument("--out", required=True, help="Output NetworkFile")
    p.set_defaults(handler=cmd_infer)

    p = sub.add_parser("locate", parents=[common], help="Rank candidate sources of a cascade set")
    p.add_argument("--network", required=True, help="NetworkFile with inferred rates")
    p.add_argument("--cascades", required=True, help="CascadeFile sharing one unknown source")
    p.add_argument("--observed-fraction", type=float, default=None, help="Observed share of infected nodes")
    p.add_argument("--regime", choices=[r.value for r in ObservationRegime], default=None)
    p.add_argument("--pre-observed", action="store_true", help="Records already hold only observed nodes")
    p.add_argument("--samples", type=int, default=settings.DEFAULT_N_SAMPLES, help="Monte-Carlo samples")
    p.add_argument("--objective", choices=[o.value for o in ScoringObjective], default=ScoringObjective.SSE.value)
    p.add_argument("--seed", type=int, default=0, help="Random seed")
    p.add_argument("--top", type=int, default=10, help="Rows to report")
    p.add_argument("--workers", type=int, default=1, help="Estimator threads")
    p.add_argument("--out", default=None, help="Output RankingFile")
    p.set_defaults(handler=cmd_locate)

    p = sub.add_parser("evaluate", parents=[common], help="Run a synthetic localization experiment")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", help="YAML experiment config")
    source.add_argument("--preset", choices=list(EXPERIMENT_PRESETS), help="Named experiment preset")
    p.add_argument("--seed", type=int, default=None, help="Override master_seed")
    p.add_argument("--trials", type=int, default=None, help="Override n_trials")
    p.add_argument("--sweep", default=None, help="TrialConfig field to vary")
    p.add_argument("--values", default=None, help="Comma-separated values of the swept field")
    p.add_argument("--workers", type=int, default=1, help="Estimator threads")
    p.add_argument("--include-timings", action="store_true", help="Keep stage timings in the JSON report")
    p.add_argument("--markdown", default=None, help="Write a Markdown summary")
    p.add_argument("--out", default=None, help="Output JSON report")
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("ingest", parents=[common], help="Convert a NetInf-style cascade dump")
    p.add_argument("--input", required=True, help="Node lines, a blank line, then node,time,... cascades")
    p.add_argument("--out", required=True, help="Output CascadeFile")
    p.add_argument("--time-scale", type=float, default=1.0, help="Divisor of time offsets (3600: s -> h)")
    p.add_argument("--window", type=float, default=None, help="Observation window (default: longest cascade)")
    p.set_defaults(handler=cmd_ingest)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one subcommand.

    Returns:
        ExitCode value: 0 on success, 2 usage, 3 missing file, 4 parse error,
        5 invalid value, 6 runtime error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ExitCode.OK if exc.code == 0 else ExitCode.USAGE

    level = "DEBUG" if args.verbose else "WARNING" if args.quiet else settings.LOG_LEVEL
    configure_logging(level)

    try:
        args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return ExitCode.USAGE
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return ExitCode.MISSING_FILE
    except CascadeFormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return ExitCode.PARSE_ERROR
    except ValueError as exc:
        print(f"invalid value: {exc}", file=sys.stderr)
        return ExitCode.INVALID_VALUE
    except Exception as exc:
        logger.debug("unhandled error", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return ExitCode.RUNTIME_ERROR
    return ExitCode.OK


def run(argv: Optional[List[str]] = None) -> None:
    sys.exit(int(main(argv)))
