"""Aggregate run outcomes into summary statistics and report files.

Per model: the best correct-count of each run, their mean, the population
standard deviation (divide by n), and the deviation as a percentage of the
mean.  Aggregation consumes best-of-run values; per-epoch averages are kept
alongside in the JSON summary so nothing is lost.

Numbers carry full precision internally and round to two decimals only at
presentation.  Recomputing the percentage from already-rounded (mean,
deviation) pairs can drift from a percentage computed on unrounded values
by a few hundredths; callers comparing against externally printed tables
should allow for that.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from statistics import fmean, pstdev

from .evaluator import RunRecord


@dataclass(frozen=True)
class RunBest:
    count: int
    epoch: int  # earliest epoch achieving the count


@dataclass
class AggregateStats:
    average: float
    std_dev: float
    std_dev_percent: float | None  # None when the average is zero


@dataclass
class ModelSummary:
    model: str
    best_counts: list[int]
    average: float
    std_dev: float
    std_dev_percent: float | None


def best_of_run(run: RunRecord) -> RunBest:
    """Maximum correct-count over a run's checkpoints; ties resolve to the
    earliest epoch."""
    if not run.checkpoints:
        raise ValueError(f"run {run.run_id} has no checkpoints")
    best = max(c.correct_count for c in run.checkpoints)
    epoch = min(c.epoch for c in run.checkpoints if c.correct_count == best)
    return RunBest(best, epoch)


def aggregate(best_counts: list[int]) -> AggregateStats:
    if not best_counts:
        raise ValueError("aggregate needs at least one value")
    average = fmean(best_counts)
    std_dev = pstdev(best_counts)
    percent = 100.0 * std_dev / average if average > 0 else None
    return AggregateStats(average, std_dev, percent)


def summarize_model(model: str, runs: list[RunRecord]) -> ModelSummary:
    counts = [best_of_run(run).count for run in sorted(runs, key=lambda r: r.run_id)]
    stats = aggregate(counts)
    return ModelSummary(model, counts, stats.average, stats.std_dev, stats.std_dev_percent)


def _fmt(value: float | None) -> str:
    return "-" if value is None else f"{value:.2f}"


def emit_reports(runs_by_model: dict[str, list[RunRecord]], out_dir) -> dict[str, Path]:
    """Write curves.csv, bestof.csv, summary.md and summary.json.

    curves.csv holds (model, run, epoch, correct_count) for per-epoch
    plots; bestof.csv holds (model, run, best) for best-of-run
    distributions; summary.md is the per-model table with the best average
    in bold; summary.json carries everything at full precision.
    """
    if not runs_by_model or not any(runs_by_model.values()):
        raise ValueError("no run data to report")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "curves": out_dir / "curves.csv",
        "bestof": out_dir / "bestof.csv",
        "summary_md": out_dir / "summary.md",
        "summary_json": out_dir / "summary.json",
    }

    models = sorted(runs_by_model)

    with open(paths["curves"], "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["model", "run", "epoch", "correct_count"])
        for model in models:
            for run in sorted(runs_by_model[model], key=lambda r: r.run_id):
                for checkpoint in sorted(run.checkpoints, key=lambda c: c.epoch):
                    writer.writerow([model, run.run_id, checkpoint.epoch, checkpoint.correct_count])

    summaries = {model: summarize_model(model, runs_by_model[model]) for model in models}

    with open(paths["bestof"], "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["model", "run", "best"])
        for model in models:
            for run in sorted(runs_by_model[model], key=lambda r: r.run_id):
                writer.writerow([model, run.run_id, best_of_run(run).count])

    best_average = max(summaries[m].average for m in models)
    lines = [
        "| Model name | Average | Standard deviation | Std. dev percent |",
        "|---|---|---|---|",
    ]
    for model in models:
        s = summaries[model]
        name = f"**{model}**" if s.average == best_average else model
        avg = f"**{s.average:.2f}**" if s.average == best_average else f"{s.average:.2f}"
        lines.append(f"| {name} | {avg} | {s.std_dev:.2f} | {_fmt(s.std_dev_percent)} |")
    paths["summary_md"].write_text("\n".join(lines) + "\n", encoding="utf-8")

    payload = {
        "metadata": {
            "aggregation": "best-of-run",
            "std_dev": "population",
        },
        "models": {},
    }
    for model in models:
        s = summaries[model]
        per_epoch: dict[str, float] = {}
        epochs = sorted({c.epoch for run in runs_by_model[model] for c in run.checkpoints})
        for epoch in epochs:
            values = [c.correct_count for run in runs_by_model[model] for c in run.checkpoints if c.epoch == epoch]
            per_epoch[str(epoch)] = fmean(values)
        payload["models"][model] = {
            "best_counts": s.best_counts,
            "average": s.average,
            "std_dev": s.std_dev,
            "std_dev_percent": s.std_dev_percent,
            "per_epoch_average": per_epoch,
            "best": s.average == best_average,
        }
    with open(paths["summary_json"], "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, indent=2, ensure_ascii=False)
        handle.write("\n")
    return paths
