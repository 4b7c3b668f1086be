"""Shared attribution types: background sets, explanations, importances.

Coalition values are interventional throughout: a coalition S evaluates the
model on composite rows taking the explicand's values on S and a background
reference's values elsewhere, averaged over the background set. The baseline
is the coalition value of the empty set (mean model output over the
background) and additivity base + sum(phi) = prediction holds on the declared
output scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import Dataset
from ..learners import BoostedModel, ForestModel, LinearModel, TreeModel

PROBABILITY = "probability"
MARGIN = "margin"

DEFAULT_BACKGROUND_SIZE = 128


@dataclass(frozen=True)
class BackgroundSet:
    """Reference rows (raw feature space) defining "feature absent"."""

    rows: np.ndarray  # (m, k)
    source: str = "unspecified"
    seed: int | None = None

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.rows, dtype=np.float64))
        if rows.shape[0] == 0:
            raise ValueError("background set must be non-empty")
        object.__setattr__(self, "rows", rows)
        self.rows.setflags(write=False)

    @property
    def size(self) -> int:
        return self.rows.shape[0]

    @classmethod
    def from_dataset(
        cls, ds: Dataset, size: int = DEFAULT_BACKGROUND_SIZE, seed: int = 0
    ) -> "BackgroundSet":
        """Up to ``size`` rows drawn deterministically by seed, order-stable."""
        if ds.n_rows <= size:
            return cls(rows=ds.values.copy(), source="dataset:all", seed=seed)
        idx = np.sort(np.random.default_rng(seed).choice(ds.n_rows, size=size, replace=False))
        return cls(rows=ds.values[idx].copy(), source=f"dataset:sample:{size}", seed=seed)

    @classmethod
    def from_rows(cls, rows: np.ndarray, source: str = "rows") -> "BackgroundSet":
        return cls(rows=np.asarray(rows, dtype=np.float64), source=source)


@dataclass(frozen=True)
class Explanation:
    """Additive attribution of one prediction: base_value + sum(phi) = prediction."""

    base_value: float
    phi: np.ndarray  # one value per schema feature
    prediction: float
    output_scale: str  # "probability" | "margin"
    method: str
    feature_names: tuple[str, ...]
    feature_values: np.ndarray
    std_errors: np.ndarray | None = None
    residual_before_adjustment: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "phi", np.asarray(self.phi, dtype=np.float64))
        object.__setattr__(self, "feature_values", np.asarray(self.feature_values, dtype=np.float64))
        self.phi.setflags(write=False)

    @property
    def additivity_gap(self) -> float:
        return abs(self.base_value + float(self.phi.sum()) - self.prediction)

    def to_records(self) -> list[dict]:
        """Table-shaped view: one record per feature (id, name, value, phi)."""
        return [
            {
                "feature_id": j,
                "feature": name,
                "feature_value": float(self.feature_values[j]),
                "phi": float(self.phi[j]),
            }
            for j, name in enumerate(self.feature_names)
        ]


@dataclass(frozen=True)
class GlobalImportance:
    """Non-negative per-feature importance with a deterministic ranking."""

    feature_names: tuple[str, ...]
    importances: np.ndarray
    method: str  # "gain" | "mean_abs_shap"

    def __post_init__(self):
        object.__setattr__(self, "importances", np.asarray(self.importances, dtype=np.float64))
        self.importances.setflags(write=False)

    @property
    def ranking(self) -> tuple[str, ...]:
        # descending importance; ties broken by feature index
        order = sorted(range(len(self.feature_names)), key=lambda j: (-self.importances[j], j))
        return tuple(self.feature_names[j] for j in order)

    def top(self, n: int) -> tuple[str, ...]:
        return self.ranking[:n]


@dataclass(frozen=True)
class DependenceData:
    """Per-row (feature value, phi) pairs plus per-category summaries."""

    feature: str
    values: np.ndarray
    phi: np.ndarray
    # per distinct value: {"value", "count", "mean_phi", "fraction_positive"}
    summaries: tuple[dict, ...]


def model_game(model):
    """(batch evaluation function, output scale) for coalition values."""
    if isinstance(model, BoostedModel):
        return model.predict_margin, MARGIN
    if isinstance(model, LinearModel):
        if model.kind == "logistic":
            return model.predict_score, PROBABILITY
        return model.predict_margin, MARGIN
    if isinstance(model, (TreeModel, ForestModel)):
        return model.predict_score, PROBABILITY
    # any callable scoring function is allowed for the sampling estimator
    if callable(getattr(model, "predict_score", None)):
        return model.predict_score, PROBABILITY
    raise TypeError(f"cannot build a coalition game for {type(model).__name__}")
