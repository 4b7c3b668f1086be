"""Model families with a uniform scoring contract.

Every trained model exposes ``predict_score`` over raw-space rows (linear
families encode internally) returning reals in [0, 1]; ``predict_label``
thresholds at 0.5 by default.
"""

from __future__ import annotations

import numpy as np

from ..encoding import EncodedMatrix, encode_for_linear, encode_for_trees
from ..errors import SchemaMismatchError
from .artifacts import (
    FAMILY_DT,
    FAMILY_GBT,
    FAMILY_LOGISTIC,
    FAMILY_PERCEPTRON,
    FAMILY_RF,
    FAMILY_SVM,
    ModelArtifact,
    family_of,
    load_artifact,
    save_artifact,
)
from .boosting import BoostedModel, train_gradient_boosted
from .config import TrainConfig
from .forest import ForestModel, train_random_forest
from .linear import LinearModel, train_linear_svm, train_logistic_regression, train_perceptron
from .trees import TreeModel, TreeNode, node_view, train_decision_tree

__all__ = [
    "TrainConfig",
    "TreeModel",
    "TreeNode",
    "ForestModel",
    "BoostedModel",
    "LinearModel",
    "ModelArtifact",
    "train_decision_tree",
    "train_random_forest",
    "train_gradient_boosted",
    "train_logistic_regression",
    "train_perceptron",
    "train_linear_svm",
    "predict_score",
    "predict_label",
    "save_artifact",
    "load_artifact",
    "family_of",
    "node_view",
    "FAMILY_REGISTRY",
    "train_family",
]

AnyModel = TreeModel | ForestModel | BoostedModel | LinearModel

# family key -> (display name, encoding kind, trainer)
FAMILY_REGISTRY: dict[str, tuple[str, str, object]] = {
    "dt": ("DT", "tree", train_decision_tree),
    "rf": ("RF", "tree", train_random_forest),
    "gbt": ("GBT", "tree", train_gradient_boosted),
    "lr": ("LR", "linear", train_logistic_regression),
    "perceptron": ("Perceptron", "linear", train_perceptron),
    "svm": ("SVM", "linear", train_linear_svm),
}


def _expected_width(model: AnyModel) -> int:
    if isinstance(model, LinearModel):
        return len(model.encoder.schema)
    return len(model.feature_names)


def predict_score(model: AnyModel, rows: np.ndarray) -> np.ndarray:
    """Score rows in [0, 1]; accepts a single row or a matrix."""
    rows = np.asarray(rows, dtype=np.float64)
    single = rows.ndim == 1
    rows = np.atleast_2d(rows)
    if rows.shape[1] != _expected_width(model):
        raise SchemaMismatchError(
            f"row width {rows.shape[1]} does not match model width {_expected_width(model)}"
        )
    scores = model.predict_score(rows)
    return scores[0] if single else scores


def predict_label(model: AnyModel, rows: np.ndarray, threshold: float = 0.5) -> np.ndarray:
    """Binary label: score >= threshold."""
    scores = predict_score(model, rows)
    return (np.asarray(scores) >= threshold).astype(np.int64)


def train_family(key: str, train_ds, cfg: TrainConfig | None = None) -> AnyModel:
    """Train one registry family on a Dataset, applying its encoding."""
    display, encoding_kind, trainer = FAMILY_REGISTRY[key]
    matrix = encode_for_trees(train_ds) if encoding_kind == "tree" else encode_for_linear(train_ds)
    return trainer(matrix, cfg)
