"""
Markdown and JSON exports of experiment reports.
"""
from typing import Optional

from ..models.experiment_models import ExperimentReport, SweepReport


def _fmt(value: Optional[float], digits: int = 3) -> str:
    return "n/a" if value is None else f"{value:.{digits}f}"


def render_markdown(report: ExperimentReport, include_timings: bool = True) -> str:
    """
    Generate a Markdown summary of an experiment report.

    Args:
        report: Completed ExperimentReport
        include_timings: Append the per-stage wall-clock table

    Returns:
        Markdown string
    """
    config = report.config
    md = f"""# Source Localization Experiment

**Nodes**: {config.n_nodes}
**Edge Density**: {config.edge_density}
**Cascades per Set**: {config.n_test_cascades_per_source}
**Observed Fraction**: {config.observed_fraction} ({config.regime.value} regime)
**Samples**: {config.n_samples}
**Master Seed**: {config.master_seed}

---

## Aggregates

**Trials**: {report.n_completed} completed, {len(report.skipped)} skipped
**Success Probability**: {_fmt(report.success_probability)}
**Mean |t_s error|**: {_fmt(report.mean_abs_start_error)}

| k | Top-k Success | Random Baseline |
|---|---------------|-----------------|
"""
    for k in config.k_list:
        md += f"| {k} | {_fmt(report.topk_success.get(k))} | {_fmt(report.random_baseline.get(k))} |\n"

    md += """
---

## Trials

| Trial | Source | Rank | Candidates | Ranked | Inferred Edges | Converged |
|-------|--------|------|------------|--------|----------------|-----------|
"""
    for row in report.rows:
        rank = row.rank if row.rank is not None else "absent"
        md += (
            f"| {row.trial} | {row.true_source} | {rank} | {row.n_candidates} | {row.n_ranked} "
            f"| {row.inferred_edges} / {row.true_edges} | {'yes' if row.inference_converged else 'no'} |\n"
        )

    if report.skipped:
        md += "\n### Skipped Trials\n"
        md += "\n".join(f"- trial {s.trial}: {s.reason}" for s in report.skipped) + "\n"

    if include_timings and report.timings:
        md += "\n---\n\n## Stage Timings\n\n| Stage | Seconds |\n|-------|---------|\n"
        for stage, seconds in report.timings.items():
            md += f"| {stage} | {seconds:.3f} |\n"

    return md


def render_sweep_markdown(sweep: SweepReport) -> str:
    """Success curve of a sweep, one row per swept value."""
    k_list = sweep.points[0].report.config.k_list if sweep.points else []
    header = " | ".join(f"Top-{k}" for k in k_list)
    md = f"# Sweep over `{sweep.field}`\n\n| {sweep.field} | Success | {header} |\n"
    md += "|" + "---|" * (2 + len(k_list)) + "\n"
    for point in sweep.points:
        cells = " | ".join(_fmt(point.report.topk_success.get(k)) for k in k_list)
        md += f"| {point.value} | {_fmt(point.report.success_probability)} | {cells} |\n"
    return md
