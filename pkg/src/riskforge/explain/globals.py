"""Model-level attribution: gain importance, mean-|phi| rankings, exports."""

from __future__ import annotations

import numpy as np

from ..dataset import Dataset
from ..errors import UnknownFeatureError, UnsupportedModelError
from ..learners import BoostedModel, ForestModel, LinearModel, TreeModel
from .base import BackgroundSet, Explanation, GlobalImportance, DependenceData
from .linear import shapley_linear_batch
from .tree_exact import shapley_tree_batch

TREE_FAMILIES = (TreeModel, ForestModel, BoostedModel)


def gain_importance(model) -> GlobalImportance:
    """Per-feature sum of recorded split gains, normalized to sum 1.

    Gini trees record the cover-weighted impurity decrease at each split and
    boosted trees their regularized gain, so one accumulation covers both.
    """
    if isinstance(model, TreeModel):
        trees = [model.tree]
    elif isinstance(model, ForestModel):
        trees = list(model.trees)
    elif isinstance(model, BoostedModel):
        trees = list(model.trees)
    else:
        raise UnsupportedModelError("gain importance needs a tree-family model")
    k = len(model.feature_names)
    totals = np.zeros(k)
    for tree in trees:
        internal = tree.feature_index >= 0
        np.add.at(totals, tree.feature_index[internal], tree.gain[internal])
    total = totals.sum()
    if total > 0:
        totals = totals / total
    return GlobalImportance(feature_names=tuple(model.feature_names), importances=totals, method="gain")


def explain_batch(model, X: np.ndarray, bg: BackgroundSet):
    """(phi (n,k), base, predictions (n,), scale) via the family's exact path."""
    if isinstance(model, TREE_FAMILIES):
        return shapley_tree_batch(model, X, bg)
    if isinstance(model, LinearModel):
        return shapley_linear_batch(model, X, bg)
    raise UnsupportedModelError(
        f"no exact attribution path for {type(model).__name__}; use shapley_sampling"
    )


def explain_row(model, x: np.ndarray, bg: BackgroundSet, feature_names=None) -> Explanation:
    """One-row exact explanation using the family's fast path."""
    x = np.asarray(x, dtype=np.float64).ravel()
    phi, base, preds, scale = explain_batch(model, x[None, :], bg)
    if feature_names is None:
        feature_names = getattr(model, "feature_names", None)
        if feature_names is None and isinstance(model, LinearModel):
            feature_names = model.encoder.schema.feature_names
    names = tuple(feature_names) if feature_names is not None else tuple(f"f{j}" for j in range(x.size))
    method = "tree_exact" if isinstance(model, TREE_FAMILIES) else "linear_exact"
    return Explanation(
        base_value=base,
        phi=phi[0],
        prediction=float(preds[0]),
        output_scale=scale,
        method=method,
        feature_names=names,
        feature_values=x,
    )


def global_mean_abs_shap(model, ds: Dataset, bg: BackgroundSet) -> GlobalImportance:
    """importance_j = mean over explained rows of |phi_j|."""
    phi, _, _, _ = explain_batch(model, ds.values, bg)
    return GlobalImportance(
        feature_names=ds.schema.feature_names,
        importances=np.abs(phi).mean(axis=0),
        method="mean_abs_shap",
    )


def beeswarm_export(model, ds: Dataset, bg: BackgroundSet) -> dict:
    """One record per (row, feature) plus per-row base/prediction bookkeeping."""
    phi, base, preds, scale = explain_batch(model, ds.values, bg)
    return {
        "feature_names": list(ds.schema.feature_names),
        "output_scale": scale,
        "base_value": base,
        "predictions": preds.tolist(),
        "values": ds.values.tolist(),
        "phi": phi.tolist(),
    }


def dependence_values(model, ds: Dataset, bg: BackgroundSet, feature: str) -> DependenceData:
    """(feature value, phi) per row with per-distinct-value summaries."""
    if feature not in ds.schema.feature_names:
        raise UnknownFeatureError(f"unknown feature {feature!r}")
    j = ds.schema.index_of(feature)
    phi, _, _, _ = explain_batch(model, ds.values, bg)
    values = ds.values[:, j]
    phi_j = phi[:, j]
    summaries = []
    for value in np.unique(values):
        mask = values == value
        sub = phi_j[mask]
        summaries.append(
            {
                "value": float(value),
                "count": int(mask.sum()),
                "mean_phi": float(sub.mean()),
                "fraction_positive": float((sub > 0).mean()),
            }
        )
    return DependenceData(feature=feature, values=values, phi=phi_j, summaries=tuple(summaries))
