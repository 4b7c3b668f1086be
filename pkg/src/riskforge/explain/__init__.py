"""Attribution engine: exact Shapley values, sampling estimator, rankings."""

from .base import (
    MARGIN,
    PROBABILITY,
    BackgroundSet,
    DependenceData,
    Explanation,
    GlobalImportance,
    model_game,
)
from .brute import shapley_brute_force
from .globals import (
    beeswarm_export,
    dependence_values,
    explain_batch,
    explain_row,
    gain_importance,
    global_mean_abs_shap,
)
from .linear import shapley_linear
from .sampling import shapley_sampling
from .tree_exact import shapley_tree_exact

__all__ = [
    "BackgroundSet",
    "Explanation",
    "GlobalImportance",
    "DependenceData",
    "PROBABILITY",
    "MARGIN",
    "model_game",
    "shapley_brute_force",
    "shapley_tree_exact",
    "shapley_linear",
    "shapley_sampling",
    "explain_row",
    "explain_batch",
    "gain_importance",
    "global_mean_abs_shap",
    "beeswarm_export",
    "dependence_values",
]
