"""Training hyperparameters with working defaults for every family."""

from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class TrainConfig:
    """Per-family hyperparameters; every default is usable as-is.

    The same config object is handed to any trainer; each family reads only
    its own knobs. All randomness derives from ``seed``.
    """

    seed: int = 0

    # decision tree
    max_depth: int = 12
    min_samples_leaf: int = 5

    # random forest
    n_trees: int = 100
    bootstrap: bool = True
    feature_subsampling: bool = True

    # gradient boosting
    n_rounds: int = 100
    learning_rate: float = 0.1
    boost_max_depth: int = 3
    boost_min_samples_leaf: int = 1
    reg_lambda: float = 1.0

    # logistic regression
    lr_step: float = 0.1
    lr_max_epochs: int = 500
    lr_tolerance: float = 1e-6
    lr_l2: float = 1e-4

    # perceptron
    perceptron_passes: int = 10

    # linear svm
    svm_lambda: float = 1e-4
    svm_epochs: int = 50

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "TrainConfig":
        return cls(**doc)
