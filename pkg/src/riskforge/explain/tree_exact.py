"""Exact interventional Shapley values for tree families in polynomial time.

For one tree, one explicand x and one reference r, a leaf is reachable by the
coalition-composite row exactly when every feature constrained on its path is
satisfied by the side supplying that feature's value. Intersecting each path
feature's conditions into one half-open interval [lo, hi) classifies it as

    A: only x's value fits (feature must be in the coalition),
    B: only r's fits (feature must be out),
    unconstrained: both fit,  blocked: neither (leaf unreachable).

A leaf with |A| = a, |B| = b and value v then adds v*(a-1)!*b!/(a+b)! to each
phi_j, j in A, and -v*a!*(b-1)!/(a+b)! to each phi_j, j in B; leaves with
a = b = 0 feed only the baseline. Averaging over references and combining
trees with their ensemble weights reproduces the brute-force enumeration
exactly, which is this module's central tested property.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from ..errors import UnsupportedModelError
from ..learners import BoostedModel, ForestModel, TreeModel
from ..learners.tree_engine import FlatTree
from .base import MARGIN, PROBABILITY, BackgroundSet, Explanation

_ROW_CHUNK = 512


@dataclass(frozen=True)
class _LeafPath:
    features: np.ndarray  # distinct feature indices constrained on the path
    lows: np.ndarray  # inclusive lower bounds
    highs: np.ndarray  # exclusive upper bounds
    value: float


def leaf_paths(tree: FlatTree) -> list[_LeafPath]:
    """Per-leaf intersected intervals; features constrained twice merge."""
    out: list[_LeafPath] = []
    stack: list[tuple[int, dict[int, tuple[float, float]]]] = [(0, {})]
    while stack:
        node, bounds = stack.pop()
        feat = int(tree.feature_index[node])
        if feat < 0:
            feats = np.fromiter(bounds.keys(), dtype=np.int64, count=len(bounds))
            lows = np.array([bounds[f][0] for f in feats], dtype=np.float64)
            highs = np.array([bounds[f][1] for f in feats], dtype=np.float64)
            out.append(_LeafPath(features=feats, lows=lows, highs=highs, value=float(tree.value[node])))
            continue
        thr = float(tree.threshold[node])
        lo, hi = bounds.get(feat, (-np.inf, np.inf))
        left_bounds = dict(bounds)
        left_bounds[feat] = (lo, min(hi, thr))  # went left: value < thr
        right_bounds = dict(bounds)
        right_bounds[feat] = (max(lo, thr), hi)  # went right: value >= thr
        stack.append((int(tree.left[node]), left_bounds))
        stack.append((int(tree.right[node]), right_bounds))
    return out


def _weight_tables(max_features: int) -> tuple[np.ndarray, np.ndarray]:
    """w_A[a, b] = (a-1)! b! / (a+b)!  and  w_B[a, b] = a! (b-1)! / (a+b)!"""
    size = max_features + 1
    w_a = np.zeros((size, size))
    w_b = np.zeros((size, size))
    for a in range(size):
        for b in range(size):
            if a + b == 0 or a + b > max_features:
                continue
            if a >= 1:
                w_a[a, b] = factorial(a - 1) * factorial(b) / factorial(a + b)
            if b >= 1:
                w_b[a, b] = factorial(a) * factorial(b - 1) / factorial(a + b)
    return w_a, w_b


def tree_phi_matrix(tree: FlatTree, X: np.ndarray, refs: np.ndarray, k: int) -> np.ndarray:
    """Per-row phi (n, k) for one tree, averaged over the reference rows."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    refs = np.atleast_2d(np.asarray(refs, dtype=np.float64))
    n, m = X.shape[0], refs.shape[0]
    phi = np.zeros((n, k))
    paths = leaf_paths(tree)
    max_p = max((p.features.size for p in paths), default=0)
    if max_p == 0:
        return phi  # single-leaf tree: no feature ever constrained
    w_a, w_b = _weight_tables(max_p)

    for lo_row in range(0, n, _ROW_CHUNK):
        hi_row = min(lo_row + _ROW_CHUNK, n)
        Xc = X[lo_row:hi_row]
        nc = Xc.shape[0]
        for path in paths:
            p = path.features.size
            if p == 0:
                continue  # contributes only to the baseline
            x_vals = Xc[:, path.features]
            r_vals = refs[:, path.features]
            sat_x = (x_vals >= path.lows) & (x_vals < path.highs)  # (nc, p)
            sat_r = (r_vals >= path.lows) & (r_vals < path.highs)  # (m, p)

            a_cnt = np.zeros((nc, m), dtype=np.int16)
            b_cnt = np.zeros((nc, m), dtype=np.int16)
            alive = np.ones((nc, m), dtype=bool)
            for t in range(p):
                sx = sat_x[:, t][:, None]
                sr = sat_r[:, t][None, :]
                a_cnt += sx & ~sr
                b_cnt += ~sx & sr
                alive &= sx | sr
            if not alive.any():
                continue

            coef_a = path.value * w_a[a_cnt, b_cnt]
            coef_b = -path.value * w_b[a_cnt, b_cnt]
            for t in range(p):
                sx = sat_x[:, t][:, None]
                sr = sat_r[:, t][None, :]
                mask_a = sx & ~sr & alive
                mask_b = ~sx & sr & alive
                f = int(path.features[t])
                if mask_a.any():
                    phi[lo_row:hi_row, f] += np.where(mask_a, coef_a, 0.0).sum(axis=1)
                if mask_b.any():
                    phi[lo_row:hi_row, f] += np.where(mask_b, coef_b, 0.0).sum(axis=1)
    return phi / m


def _model_trees_and_scale(model):
    if isinstance(model, TreeModel):
        return [(model.tree, 1.0)], 0.0, PROBABILITY
    if isinstance(model, ForestModel):
        w = 1.0 / len(model.trees)
        return [(t, w) for t in model.trees], 0.0, PROBABILITY
    if isinstance(model, BoostedModel):
        return [(t, model.learning_rate) for t in model.trees], model.base_margin, MARGIN
    raise UnsupportedModelError(
        f"tree-exact attribution does not support {type(model).__name__}"
    )


def shapley_tree_batch(model, X: np.ndarray, bg: BackgroundSet):
    """(phi (n, k), base, predictions (n,), scale) for a tree-family model."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    k = X.shape[1]
    weighted_trees, offset, scale = _model_trees_and_scale(model)
    phi = np.zeros((X.shape[0], k))
    base = offset
    for tree, weight in weighted_trees:
        phi += weight * tree_phi_matrix(tree, X, bg.rows, k)
        base += weight * float(tree.predict_leaf_values(bg.rows).mean())
    if scale == MARGIN:
        predictions = model.predict_margin(X)
    else:
        predictions = model.predict_score(X)
    return phi, float(base), predictions, scale


def shapley_tree_exact(model, x: np.ndarray, bg: BackgroundSet, feature_names=None) -> Explanation:
    """Exact per-reference tree attribution for one row."""
    x = np.asarray(x, dtype=np.float64).ravel()
    phi, base, predictions, scale = shapley_tree_batch(model, x[None, :], bg)
    names = tuple(feature_names) if feature_names is not None else tuple(
        getattr(model, "feature_names", tuple(f"f{j}" for j in range(x.size)))
    )
    return Explanation(
        base_value=base,
        phi=phi[0],
        prediction=float(predictions[0]),
        output_scale=scale,
        method="tree_exact",
        feature_names=names,
        feature_values=x,
    )
