"""Closed-form Shapley values for linear-margin models.

On the margin scale the coalition game is additive across encoded columns, so
each column's value is w_col * (x_col - mean background column) exactly; one-
hot groups fold back by summation so every family shares the original feature
vocabulary.
"""

from __future__ import annotations

import numpy as np

from ..learners import LinearModel
from .base import MARGIN, BackgroundSet, Explanation


def shapley_linear_batch(model: LinearModel, X: np.ndarray, bg: BackgroundSet):
    """(phi (n, k), base, margins (n,), scale) for a linear model."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    enc = model.encoder
    x_enc = enc.transform_rows(X)
    bg_mean = enc.transform_rows(bg.rows).mean(axis=0)
    col_phi = (x_enc - bg_mean) * model.weights  # (n, encoded columns)
    k = len(enc.schema)
    phi = np.zeros((X.shape[0], k))
    for j, cols in enumerate(enc.groups):
        phi[:, j] = col_phi[:, list(cols)].sum(axis=1)
    base = float(bg_mean @ model.weights + model.bias)
    margins = model.margin_encoded(x_enc)
    return phi, base, margins, MARGIN


def shapley_linear(model: LinearModel, x: np.ndarray, bg: BackgroundSet, feature_names=None) -> Explanation:
    x = np.asarray(x, dtype=np.float64).ravel()
    phi, base, margins, scale = shapley_linear_batch(model, x[None, :], bg)
    names = tuple(feature_names) if feature_names is not None else model.encoder.schema.feature_names
    return Explanation(
        base_value=base,
        phi=phi[0],
        prediction=float(margins[0]),
        output_scale=scale,
        method="linear_exact",
        feature_names=names,
        feature_values=x,
    )
