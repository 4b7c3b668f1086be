"""Bootstrap-aggregated forest of probability-leaf CART trees."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..encoding import EncodedMatrix
from .config import TrainConfig
from .tree_engine import FeatureCodes, FlatTree, gini_criterion, grow_tree
from .trees import CLASS_PROBABILITY


@dataclass(frozen=True)
class ForestModel:
    """Mean of per-tree class probabilities; tree order does not matter."""

    trees: tuple[FlatTree, ...]
    tree_seeds: tuple[tuple[int, int], ...]  # (config seed, tree index) per tree
    features_per_split: int
    feature_names: tuple[str, ...]
    leaf_semantics: str = CLASS_PROBABILITY

    def predict_score(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        total = np.zeros(X.shape[0])
        for tree in self.trees:
            total += tree.predict_leaf_values(X)
        return total / len(self.trees)


def train_random_forest(train: EncodedMatrix, cfg: TrainConfig | None = None) -> ForestModel:
    """Grow ``n_trees`` CART trees on bootstrap resamples.

    Each tree's bootstrap draw and per-node feature subsets come from streams
    seeded by (seed, tree index), so results do not depend on scheduling.
    """
    cfg = cfg or TrainConfig()
    coded = FeatureCodes(train.values)
    k = train.n_columns
    n = train.n_rows
    q = max(1, math.floor(math.sqrt(k))) if cfg.feature_subsampling else k
    labels = train.labels.astype(np.float64)
    zeros = np.zeros(n)

    trees: list[FlatTree] = []
    seeds: list[tuple[int, int]] = []
    for t in range(cfg.n_trees):
        ss = np.random.SeedSequence((cfg.seed, t))
        boot_rng, feat_rng = (np.random.default_rng(c) for c in ss.spawn(2))
        rows = boot_rng.integers(0, n, size=n) if cfg.bootstrap else np.arange(n)
        tree = grow_tree(
            coded=coded,
            rows=rows,
            stat_a=labels,
            stat_b=zeros,
            criterion=gini_criterion(),
            max_depth=cfg.max_depth,
            min_samples_leaf=cfg.min_samples_leaf,
            feature_rng=feat_rng,
            features_per_split=q if q < k else None,
        )
        trees.append(tree)
        seeds.append((cfg.seed, t))
    return ForestModel(
        trees=tuple(trees),
        tree_seeds=tuple(seeds),
        features_per_split=q,
        feature_names=train.column_names,
    )
