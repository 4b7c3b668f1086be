"""Exact Shapley values by full coalition enumeration: the oracle.

phi_j = sum over S not containing j of |S|! (k-|S|-1)! / k! * (v(S+j) - v(S)),
with v(S) the mean model output over background-composite rows. Exponential
in the feature count, guarded at k <= 20; every fast path in this package is
validated against this implementation.
"""

from __future__ import annotations

from math import factorial

import numpy as np

from ..errors import TooManyFeaturesError
from .base import BackgroundSet, Explanation, model_game

BRUTE_FORCE_MAX_FEATURES = 20
_MASK_CHUNK = 1 << 14


def coalition_values(game, x: np.ndarray, bg: BackgroundSet) -> np.ndarray:
    """v over all 2^k coalitions encoded as bitmasks (bit j = feature j from x)."""
    k = x.shape[0]
    n_masks = 1 << k
    bit_table = ((np.arange(n_masks)[:, None] >> np.arange(k)) & 1).astype(bool)
    v = np.zeros(n_masks)
    for lo in range(0, n_masks, _MASK_CHUNK):
        hi = min(lo + _MASK_CHUNK, n_masks)
        bits = bit_table[lo:hi]
        chunk = np.zeros(hi - lo)
        for ref in bg.rows:
            composite = np.where(bits, x, ref)
            chunk += game(composite)
        v[lo:hi] = chunk / bg.size
    return v


def shapley_brute_force(model, x: np.ndarray, bg: BackgroundSet, feature_names=None) -> Explanation:
    """Exact interventional Shapley values for one row."""
    x = np.asarray(x, dtype=np.float64).ravel()
    k = x.shape[0]
    if k > BRUTE_FORCE_MAX_FEATURES:
        raise TooManyFeaturesError(
            f"brute force enumerates 2^{k} coalitions; limit is {BRUTE_FORCE_MAX_FEATURES} features"
        )
    game, scale = model_game(model)
    v = coalition_values(game, x, bg)

    masks = np.arange(1 << k)
    popcount = np.zeros(1 << k, dtype=np.int64)
    for j in range(k):
        popcount += (masks >> j) & 1
    weights = np.array(
        [factorial(s) * factorial(k - s - 1) / factorial(k) for s in range(k)], dtype=np.float64
    )
    phi = np.empty(k)
    for j in range(k):
        without = masks[(masks >> j) & 1 == 0]
        phi[j] = float(np.sum(weights[popcount[without]] * (v[without | (1 << j)] - v[without])))

    names = tuple(feature_names) if feature_names is not None else tuple(f"f{j}" for j in range(k))
    return Explanation(
        base_value=float(v[0]),
        phi=phi,
        prediction=float(v[-1]),
        output_scale=scale,
        method="brute_force",
        feature_names=names,
        feature_values=x,
    )
