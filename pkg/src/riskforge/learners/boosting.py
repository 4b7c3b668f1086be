"""Second-order (Newton) gradient-boosted trees with logistic loss."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..encoding import EncodedMatrix
from ..errors import NonFiniteLossError, SingleClassError
from .config import TrainConfig
from .tree_engine import FeatureCodes, FlatTree, grow_tree, newton_criterion
from .trees import MARGIN_INCREMENT


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def log_loss(y: np.ndarray, margins: np.ndarray) -> float:
    # numerically stable: log(1 + e^-|z|) + max(z*(1-2y)... use logaddexp
    return float(np.mean(np.logaddexp(0.0, margins) - y * margins))


@dataclass(frozen=True)
class BoostedModel:
    """score = sigmoid(base_margin + learning_rate * sum of tree outputs)."""

    trees: tuple[FlatTree, ...]
    base_margin: float
    learning_rate: float
    reg_lambda: float
    feature_names: tuple[str, ...]
    link: str = "logistic"
    leaf_semantics: str = MARGIN_INCREMENT
    train_loss_curve: tuple[float, ...] = field(default=(), compare=False)

    def predict_margin(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        margin = np.full(X.shape[0], self.base_margin)
        for tree in self.trees:
            margin += self.learning_rate * tree.predict_leaf_values(X)
        return margin

    def predict_score(self, X: np.ndarray) -> np.ndarray:
        return sigmoid(self.predict_margin(X))


def train_gradient_boosted(train: EncodedMatrix, cfg: TrainConfig | None = None) -> BoostedModel:
    """Stagewise Newton boosting: g = p - y, h = p(1-p), leaf = -G/(H+lambda)."""
    cfg = cfg or TrainConfig()
    y = train.labels.astype(np.float64)
    prior = float(y.mean())
    if prior in (0.0, 1.0):
        raise SingleClassError("gradient boosting needs both classes present")
    base_margin = float(np.log(prior / (1.0 - prior)))

    coded = FeatureCodes(train.values)
    rows = np.arange(train.n_rows)
    criterion = newton_criterion(cfg.reg_lambda)
    margins = np.full(train.n_rows, base_margin)
    losses = [log_loss(y, margins)]
    trees: list[FlatTree] = []
    for round_index in range(cfg.n_rounds):
        if not np.isfinite(margins).all():
            raise NonFiniteLossError(
                f"boosting margins left the finite range at round {round_index}",
                round_index=round_index,
            )
        p = sigmoid(margins)
        g = p - y
        h = p * (1.0 - p)
        tree = grow_tree(
            coded=coded,
            rows=rows,
            stat_a=g,
            stat_b=h,
            criterion=criterion,
            max_depth=cfg.boost_max_depth,
            min_samples_leaf=cfg.boost_min_samples_leaf,
        )
        trees.append(tree)
        margins = margins + cfg.learning_rate * tree.value[tree.apply(train.values)]
        loss = log_loss(y, margins)
        if not np.isfinite(loss):
            raise NonFiniteLossError(
                f"boosting loss became non-finite at round {round_index}",
                round_index=round_index,
            )
        losses.append(loss)
    return BoostedModel(
        trees=tuple(trees),
        base_margin=base_margin,
        learning_rate=cfg.learning_rate,
        reg_lambda=cfg.reg_lambda,
        feature_names=train.column_names,
        train_loss_curve=tuple(losses),
    )
