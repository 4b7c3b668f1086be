"""Repeated-run benchmark harness over the model-family registry.

Runs the full cross product of (test fraction, seed): stratified split, train
every requested family, score on the held-out part. Cells are independent and
may run in parallel; the report assembles them by key so scheduling cannot
change results. The display table carries one row per benchmark name, with
the hinge-margin family reported under both of its conventional names.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from .dataset import Dataset, stratified_split
from .learners import FAMILY_REGISTRY, TrainConfig, predict_label, predict_score, train_family
from .metrics import MetricsRow, confusion_matrix, precision_recall_f, roc_auc

DEFAULT_FRACTIONS = (0.2, 0.3)
DEFAULT_SEEDS = tuple(range(1, 11))

# display rows in benchmark-table order; the hinge family appears twice
TABLE_ROWS: tuple[tuple[str, str], ...] = (
    ("SVM", "svm"),
    ("LR", "lr"),
    ("DT", "dt"),
    ("RF", "rf"),
    ("Linear SVC", "svm"),
    ("Perceptron", "perceptron"),
    ("GBT", "gbt"),
)

METRIC_NAMES = ("accuracy", "precision", "recall", "f_beta", "auc")


def worker_count(requested: int | None = None) -> int:
    """Worker cap: explicit argument, then RISKFORGE_THREADS, then cpu count."""
    if requested is not None and requested > 0:
        return requested
    env = os.environ.get("RISKFORGE_THREADS")
    if env:
        try:
            value = int(env)
            if value > 0:
                return value
        except ValueError:
            pass
    return os.cpu_count() or 1


def evaluate_model(model, test: Dataset, beta: float = 1.0) -> MetricsRow:
    """Threshold scores at 0.5 for the confusion table; AUC from raw scores."""
    scores = predict_score(model, test.values)
    labels = (np.asarray(scores) >= 0.5).astype(np.int64)
    ct = confusion_matrix(test.labels, labels)
    precision, recall, f_beta, flags = precision_recall_f(ct, beta)
    return MetricsRow(
        accuracy=ct.accuracy,
        precision=precision,
        recall=recall,
        f_beta=f_beta,
        auc=roc_auc(test.labels, scores),
        beta=beta,
        undefined_precision=flags["undefined_precision"],
        undefined_recall=flags["undefined_recall"],
    )


@dataclass(frozen=True)
class BenchmarkCell:
    family: str
    fraction: float
    seed: int
    metrics: MetricsRow | None
    error: str | None = None


@dataclass(frozen=True)
class BenchmarkReport:
    families: tuple[str, ...]
    fractions: tuple[float, ...]
    seeds: tuple[int, ...]
    cells: tuple[BenchmarkCell, ...]

    def family_cells(self, family: str) -> list[BenchmarkCell]:
        return [c for c in self.cells if c.family == family and c.metrics is not None]

    def aggregate(self, family: str) -> dict[str, tuple[float, float]]:
        """Per metric: (mean, population std) across successful cells."""
        cells = self.family_cells(family)
        if not cells:
            return {}
        out = {}
        for name in METRIC_NAMES:
            values = np.array([getattr(c.metrics, name) for c in cells])
            out[name] = (float(values.mean()), float(values.std()))
        return out

    def errors(self) -> list[BenchmarkCell]:
        return [c for c in self.cells if c.error is not None]

    def to_dict(self) -> dict:
        return {
            "families": list(self.families),
            "fractions": list(self.fractions),
            "seeds": list(self.seeds),
            "metric_names": list(METRIC_NAMES),
            "cells": [
                {
                    "family": c.family,
                    "fraction": c.fraction,
                    "seed": c.seed,
                    "metrics": None
                    if c.metrics is None
                    else {name: getattr(c.metrics, name) for name in METRIC_NAMES},
                    "error": c.error,
                }
                for c in self.cells
            ],
            "aggregates": {
                family: {name: list(pair) for name, pair in self.aggregate(family).items()}
                for family in self.families
            },
        }


def _run_cell(data: Dataset, fraction: float, seed: int, families: tuple[str, ...], cfg: TrainConfig):
    import warnings

    results = []
    try:
        pair = stratified_split(data, fraction, seed)
    except Exception as exc:  # noqa: BLE001 - a failed cell is recorded, not fatal
        return [
            BenchmarkCell(family=f, fraction=fraction, seed=seed, metrics=None, error=repr(exc))
            for f in families
        ]
    for family in families:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                model = train_family(family, pair.train, cfg)
            results.append(
                BenchmarkCell(
                    family=family,
                    fraction=fraction,
                    seed=seed,
                    metrics=evaluate_model(model, pair.test),
                )
            )
        except Exception as exc:  # noqa: BLE001
            results.append(
                BenchmarkCell(family=family, fraction=fraction, seed=seed, metrics=None, error=repr(exc))
            )
    return results


def repeated_evaluation(
    families: list[str] | tuple[str, ...],
    data: Dataset,
    fractions=DEFAULT_FRACTIONS,
    seeds=DEFAULT_SEEDS,
    cfg: TrainConfig | None = None,
    n_jobs: int | None = None,
) -> BenchmarkReport:
    """Full (fraction, seed) grid; per-family mean and std across repeats."""
    families = tuple(families)
    fractions = tuple(fractions)
    seeds = tuple(seeds)
    if not families or not fractions or not seeds:
        raise ValueError("families, fractions and seeds must be non-empty")
    unknown = [f for f in families if f not in FAMILY_REGISTRY]
    if unknown:
        raise KeyError(f"unknown families: {unknown}")
    base_cfg = cfg or TrainConfig()
    grid = [(fraction, seed) for fraction in fractions for seed in seeds]
    jobs = min(worker_count(n_jobs), len(grid))
    if jobs > 1:
        chunks = Parallel(n_jobs=jobs)(
            delayed(_run_cell)(data, fraction, seed, families, base_cfg) for fraction, seed in grid
        )
    else:
        chunks = [_run_cell(data, fraction, seed, families, base_cfg) for fraction, seed in grid]
    cells = [cell for chunk in chunks for cell in chunk]
    cells.sort(key=lambda c: (families.index(c.family), c.fraction, c.seed))
    return BenchmarkReport(families=families, fractions=fractions, seeds=seeds, cells=tuple(cells))


def render_table(report: BenchmarkReport) -> str:
    """Aligned plain-text benchmark table, metrics in percent."""
    headers = ["Model", "Accuracy", "Precision", "Recall", "F1 Score", "AUC"]
    rows = [headers]
    for display, family in TABLE_ROWS:
        if family not in report.families:
            continue
        agg = report.aggregate(family)
        if not agg:
            rows.append([display] + ["n/a"] * 5)
            continue
        rows.append(
            [display]
            + [f"{agg[name][0] * 100:.2f}" for name in ("accuracy", "precision", "recall", "f_beta")]
            + [f"{agg['auc'][0] * 100:.0f}"]
        )
    widths = [max(len(r[i]) for r in rows) for i in range(len(headers))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * widths[j] for j in range(len(headers))).rstrip())
    return "\n".join(lines) + "\n"
