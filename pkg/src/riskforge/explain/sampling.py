"""Permutation-sampling Shapley estimator for any scoring model.

Walks random feature orderings, accruing each feature's marginal change in
the background-averaged model output when its value switches from reference
to explicand. Reports a standard error per feature and enforces additivity by
spreading the (recorded) residual proportionally to those standard errors.
"""

from __future__ import annotations

import numpy as np

from .base import BackgroundSet, Explanation, model_game


def shapley_sampling(
    model,
    x: np.ndarray,
    bg: BackgroundSet,
    n_permutations: int = 200,
    seed: int = 0,
    feature_names=None,
) -> Explanation:
    if n_permutations < 1:
        raise ValueError("n_permutations must be >= 1")
    x = np.asarray(x, dtype=np.float64).ravel()
    k = x.shape[0]
    game, scale = model_game(model)
    rng = np.random.default_rng(seed)

    base = float(np.mean(game(bg.rows)))
    prediction = float(np.mean(game(np.tile(x, (1, 1)))))

    marginals = np.empty((n_permutations, k))
    for p in range(n_permutations):
        order = rng.permutation(k)
        composite = bg.rows.copy()
        previous = base
        for j in order:
            composite[:, j] = x[j]
            current = float(np.mean(game(composite)))
            marginals[p, j] = current - previous
            previous = current
    phi = marginals.mean(axis=0)
    if n_permutations > 1:
        std_errors = marginals.std(axis=0, ddof=1) / np.sqrt(n_permutations)
    else:
        std_errors = np.zeros(k)

    residual = prediction - base - float(phi.sum())
    se_total = float(std_errors.sum())
    if residual != 0.0:
        if se_total > 0.0:
            phi = phi + residual * std_errors / se_total
        else:
            phi = phi + residual / k
    names = tuple(feature_names) if feature_names is not None else tuple(
        getattr(model, "feature_names", tuple(f"f{j}" for j in range(k)))
    )
    return Explanation(
        base_value=base,
        phi=phi,
        prediction=prediction,
        output_scale=scale,
        method=f"sampling:{n_permutations}",
        feature_names=names,
        feature_values=x,
        std_errors=std_errors,
        residual_before_adjustment=residual,
    )
