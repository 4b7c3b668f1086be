"""Single CART decision tree: model type and trainer."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..encoding import EncodedMatrix
from .config import TrainConfig
from .tree_engine import FeatureCodes, FlatTree, gini_criterion, grow_tree

CLASS_PROBABILITY = "class_probability"
MARGIN_INCREMENT = "margin_increment"


@dataclass(frozen=True)
class TreeNode:
    """Object view over one node of a flat tree (tests and hand traces)."""

    feature_index: int
    threshold: float
    left: "TreeNode | None"
    right: "TreeNode | None"
    value: float
    cover: int

    @property
    def is_leaf(self) -> bool:
        return self.feature_index < 0


def node_view(tree: FlatTree, index: int = 0) -> TreeNode:
    fi = int(tree.feature_index[index])
    if fi < 0:
        return TreeNode(
            feature_index=-1,
            threshold=float("nan"),
            left=None,
            right=None,
            value=float(tree.value[index]),
            cover=int(tree.cover[index]),
        )
    return TreeNode(
        feature_index=fi,
        threshold=float(tree.threshold[index]),
        left=node_view(tree, int(tree.left[index])),
        right=node_view(tree, int(tree.right[index])),
        value=float(tree.value[index]),
        cover=int(tree.cover[index]),
    )


@dataclass(frozen=True)
class TreeModel:
    """CART tree; leaves hold either class probabilities or margin increments."""

    tree: FlatTree
    leaf_semantics: str
    feature_names: tuple[str, ...]

    @property
    def root(self) -> TreeNode:
        return node_view(self.tree)

    def predict_score(self, X: np.ndarray) -> np.ndarray:
        return self.tree.predict_leaf_values(X)


def train_decision_tree(train: EncodedMatrix, cfg: TrainConfig | None = None) -> TreeModel:
    """Greedy Gini CART on raw code columns; leaves store positive fraction."""
    cfg = cfg or TrainConfig()
    coded = FeatureCodes(train.values)
    tree = grow_tree(
        coded=coded,
        rows=np.arange(train.n_rows),
        stat_a=train.labels.astype(np.float64),
        stat_b=np.zeros(train.n_rows),
        criterion=gini_criterion(),
        max_depth=cfg.max_depth,
        min_samples_leaf=cfg.min_samples_leaf,
        warn_degenerate=True,
    )
    return TreeModel(tree=tree, leaf_semantics=CLASS_PROBABILITY, feature_names=train.column_names)
