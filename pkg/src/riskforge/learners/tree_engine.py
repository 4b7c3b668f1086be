"""Level-wise vectorized CART / Newton tree construction on flat arrays.

Split semantics, shared by every tree family:

- routing is ``go left iff value < threshold``;
- candidate thresholds are midpoints between consecutive distinct values
  present in the node;
- both children must keep ``min_samples_leaf`` rows;
- ties on split score break to the lowest feature index, then the lowest
  threshold.

The grower works one depth level at a time. Features are pre-encoded once
into ranks over their sorted distinct values; low-cardinality features use
per-node histograms via ``bincount`` and high-cardinality ones a per-level
``lexsort`` scan, so the whole level is split with a constant number of numpy
passes instead of per-node Python work.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateDataWarning

HIST_MAX_BINS = 64

GINI = "gini"
NEWTON = "newton"


@dataclass
class FlatTree:
    """One binary tree as parallel node arrays; node 0 is the root.

    Leaves have ``feature_index == -1`` and children ``-1``. ``value`` is the
    leaf prediction (positive-class fraction or margin increment); internal
    nodes carry the value they would have had as leaves. ``gain`` stores the
    split score consumed by gain-based importance and is 0 at leaves.
    """

    feature_index: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    cover: np.ndarray
    gain: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.feature_index.shape[0]

    @property
    def n_leaves(self) -> int:
        return int((self.feature_index < 0).sum())

    @property
    def max_depth(self) -> int:
        depth = np.zeros(self.n_nodes, dtype=np.int64)
        for i in range(self.n_nodes):
            if self.feature_index[i] >= 0:
                depth[self.left[i]] = depth[i] + 1
                depth[self.right[i]] = depth[i] + 1
        return int(depth.max()) if self.n_nodes else 0

    def predict_leaf_values(self, X: np.ndarray) -> np.ndarray:
        """Leaf value reached by each row of X."""
        return self.value[self.apply(X)]

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf node index reached by each row of X."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        node = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            feat = self.feature_index[node]
            active = np.flatnonzero(feat >= 0)
            if active.size == 0:
                return node
            cur = node[active]
            go_left = X[active, feat[active]] < self.threshold[cur]
            node[active] = np.where(go_left, self.left[cur], self.right[cur])

    def to_arrays(self) -> dict:
        return {
            "feature_index": self.feature_index.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
            "cover": self.cover.tolist(),
            "gain": self.gain.tolist(),
        }

    @classmethod
    def from_arrays(cls, doc: dict) -> "FlatTree":
        return cls(
            feature_index=np.asarray(doc["feature_index"], dtype=np.int64),
            threshold=np.asarray(doc["threshold"], dtype=np.float64),
            left=np.asarray(doc["left"], dtype=np.int64),
            right=np.asarray(doc["right"], dtype=np.int64),
            value=np.asarray(doc["value"], dtype=np.float64),
            cover=np.asarray(doc["cover"], dtype=np.int64),
            gain=np.asarray(doc["gain"], dtype=np.float64),
        )


class FeatureCodes:
    """Per-feature sorted distinct values and integer ranks, computed once.

    Bootstrap resamples and node subsets reuse the same global coding: the
    distinct values present in a node are exactly the distinct ranks present
    there, so midpoint thresholds stay exact.
    """

    def __init__(self, X: np.ndarray):
        self.X = np.ascontiguousarray(np.asarray(X, dtype=np.float64))
        self.n_rows, self.n_features = self.X.shape
        self.uniques: list[np.ndarray] = []
        self.codes: list[np.ndarray] = []  # one contiguous int32 vector per feature
        for j in range(self.n_features):
            uniq, inverse = np.unique(self.X[:, j], return_inverse=True)
            self.uniques.append(uniq)
            self.codes.append(np.ascontiguousarray(inverse.astype(np.int32)))

    def values_at(self, rows: np.ndarray, features: np.ndarray) -> np.ndarray:
        return self.X[rows, features]


def _gini_children_score(left_pos, left_n, right_pos, right_n):
    """Summed child impurity mass n_c * 2 p (1-p); lower is better."""
    with np.errstate(invalid="ignore", divide="ignore"):
        pl = left_pos / left_n
        pr = right_pos / right_n
    return left_n * 2.0 * pl * (1.0 - pl) + right_n * 2.0 * pr * (1.0 - pr)


def _parent_impurity_mass(pos, n):
    with np.errstate(invalid="ignore", divide="ignore"):
        p = pos / n
    return n * 2.0 * p * (1.0 - p)


@dataclass
class _Criterion:
    """Split scoring over per-row statistics (a, b) plus counts.

    gini:   a = positive indicator, b unused.     score = impurity decrease.
    newton: a = gradient, b = hessian.            score = regularized gain.
    Leaf values: positive fraction, resp. -G / (H + lambda).
    """

    kind: str
    reg_lambda: float = 1.0

    @property
    def needs_b(self) -> bool:
        return self.kind == NEWTON

    def leaf_value(self, tot_a, tot_b, tot_n):
        if self.kind == GINI:
            return tot_a / tot_n
        return -tot_a / (tot_b + self.reg_lambda)

    def split_score(self, la, lb, ln, ra, rb, rn, tot_a, tot_b, tot_n):
        """Score to maximize; shapes broadcast. Invalid entries handled by caller."""
        if self.kind == GINI:
            parent = _parent_impurity_mass(tot_a, tot_n)
            return parent - _gini_children_score(la, ln, ra, rn)
        lam = self.reg_lambda
        return 0.5 * (
            la * la / (lb + lam) + ra * ra / (rb + lam) - tot_a * tot_a / (tot_b + lam)
        )

    def splittable(self, tot_a, tot_n, min_leaf) -> np.ndarray:
        ok = tot_n >= 2 * min_leaf
        if self.kind == GINI:
            ok = ok & (tot_a > 0) & (tot_a < tot_n)  # pure nodes stop
        return ok

    def accept(self, score: np.ndarray) -> np.ndarray:
        if self.kind == GINI:
            return score > -np.inf  # any valid candidate; zero decrease allowed
        return score > 0.0

    def recorded_gain(self, score, tot_n):
        # cover-weighted impurity decrease for CART; the gain itself for Newton
        if self.kind == GINI:
            return score
        return score


class _NodeBest:
    """Running best split per active node with deterministic tie-breaking."""

    def __init__(self, n_nodes: int):
        self.score = np.full(n_nodes, -np.inf)
        self.feature = np.full(n_nodes, -1, dtype=np.int64)
        self.threshold = np.full(n_nodes, np.nan)

    def update(self, feature_j: int, score: np.ndarray, threshold: np.ndarray, allowed: np.ndarray):
        """Features arrive in ascending order, so strict improvement keeps the
        lowest feature index on ties; per-feature candidates already carry the
        lowest tying threshold."""
        better = allowed & (score > self.score)
        self.score[better] = score[better]
        self.feature[better] = feature_j
        self.threshold[better] = threshold[better]


def _hist_best_split(codes, stats_a, stats_b, node_of, n_nodes, uniq, tot_a, tot_b, tot_n, crit, min_leaf):
    """Best candidate per node for one low-cardinality feature."""
    n_bins = uniq.shape[0]
    if n_bins < 2:
        return None
    key = node_of * n_bins + codes
    size = n_nodes * n_bins
    hist_n = np.bincount(key, minlength=size).reshape(n_nodes, n_bins).astype(np.float64)
    hist_a = np.bincount(key, weights=stats_a, minlength=size).reshape(n_nodes, n_bins)

    cum_n = np.cumsum(hist_n, axis=1)
    cum_a = np.cumsum(hist_a, axis=1)
    if crit.needs_b:
        hist_b = np.bincount(key, weights=stats_b, minlength=size).reshape(n_nodes, n_bins)
        cum_b = np.cumsum(hist_b, axis=1)
    else:
        cum_b = np.zeros((n_nodes, n_bins))

    # next distinct value present to the right of each bin (for midpoints)
    present = hist_n > 0
    vals = np.broadcast_to(uniq, (n_nodes, n_bins))
    masked = np.where(present, vals, np.inf)
    suffix_min = np.minimum.accumulate(masked[:, ::-1], axis=1)[:, ::-1]
    next_val = np.full((n_nodes, n_bins), np.inf)
    next_val[:, :-1] = suffix_min[:, 1:]

    ln = cum_n[:, :-1]
    la = cum_a[:, :-1]
    lb = cum_b[:, :-1]
    rn = tot_n[:, None] - ln
    ra = tot_a[:, None] - la
    rb = tot_b[:, None] - lb

    valid = (
        present[:, :-1]
        & np.isfinite(next_val[:, :-1])
        & (ln >= min_leaf)
        & (rn >= min_leaf)
    )
    score = crit.split_score(la, lb, ln, ra, rb, rn, tot_a[:, None], tot_b[:, None], tot_n[:, None])
    score = np.where(valid, score, -np.inf)
    # thresholds ascend along the bin axis, so argmax's first hit is the lowest
    best_c = np.argmax(score, axis=1)
    rows = np.arange(n_nodes)
    best_score = score[rows, best_c]
    best_thr = (vals[rows, best_c] + next_val[rows, best_c]) / 2.0
    return best_score, best_thr


def _sorted_best_split(codes, stats_a, stats_b, node_of, n_nodes, uniq, tot_a, tot_b, tot_n, crit, min_leaf):
    """Best candidate per node for one high-cardinality feature via lexsort."""
    order = np.lexsort((codes, node_of))
    cn = node_of[order]
    cc = codes[order]
    pa = np.concatenate(([0.0], np.cumsum(stats_a[order])))
    if crit.needs_b:
        pb = np.concatenate(([0.0], np.cumsum(stats_b[order])))
    else:
        pb = np.zeros(order.size + 1)
    start = np.searchsorted(cn, np.arange(n_nodes))

    boundary = np.flatnonzero((cn[:-1] == cn[1:]) & (cc[:-1] != cc[1:]))
    if boundary.size == 0:
        return None
    node_c = cn[boundary]
    ln = (boundary + 1 - start[node_c]).astype(np.float64)
    la = pa[boundary + 1] - pa[start[node_c]]
    lb = pb[boundary + 1] - pb[start[node_c]]
    rn = tot_n[node_c] - ln
    ra = tot_a[node_c] - la
    rb = tot_b[node_c] - lb

    valid = (ln >= min_leaf) & (rn >= min_leaf)
    if not valid.any():
        return None
    boundary = boundary[valid]
    node_c = node_c[valid]
    score = crit.split_score(
        la[valid], lb[valid], ln[valid], ra[valid], rb[valid], rn[valid],
        tot_a[node_c], tot_b[node_c], tot_n[node_c],
    )
    thr = (uniq[cc[boundary]] + uniq[cc[boundary + 1]]) / 2.0

    best_score = np.full(n_nodes, -np.inf)
    np.maximum.at(best_score, node_c, score)
    best_thr = np.full(n_nodes, np.inf)
    achieved = score == best_score[node_c]
    np.minimum.at(best_thr, node_c[achieved], thr[achieved])
    best_thr = np.where(np.isfinite(best_thr), best_thr, np.nan)
    return best_score, best_thr


def grow_tree(
    coded: FeatureCodes,
    rows: np.ndarray,
    stat_a: np.ndarray,
    stat_b: np.ndarray,
    criterion: _Criterion,
    max_depth: int,
    min_samples_leaf: int,
    feature_rng: np.random.Generator | None = None,
    features_per_split: int | None = None,
    warn_degenerate: bool = False,
) -> FlatTree:
    """Grow one tree over the row multiset ``rows`` (indices into the coded matrix).

    ``stat_a``/``stat_b`` are per-coded-row statistics (label indicator for
    Gini; gradient and hessian for Newton). When ``features_per_split`` is
    set, each node sees its own subset drawn from ``feature_rng``.
    """
    k = coded.n_features
    # node arrays grow dynamically as python lists, frozen to numpy at the end
    feature_index = [-1]
    threshold = [np.nan]
    left = [-1]
    right = [-1]
    value = [0.0]
    cover = [0]
    gain = [0.0]

    slot_rows = np.asarray(rows, dtype=np.int64)
    slot_node_global = np.zeros(slot_rows.shape[0], dtype=np.int64)
    active_nodes = np.array([0], dtype=np.int64)

    a_all = stat_a[slot_rows]
    b_all = stat_b[slot_rows]

    depth = 0
    while active_nodes.size > 0 and slot_rows.size > 0:
        m = active_nodes.size
        # active_nodes is ascending, so searchsorted compresses ids to 0..m-1
        node_of = np.searchsorted(active_nodes, slot_node_global)

        tot_n = np.bincount(node_of, minlength=m).astype(np.float64)
        tot_a = np.bincount(node_of, weights=a_all, minlength=m)
        tot_b = np.bincount(node_of, weights=b_all, minlength=m)

        leaf_values = criterion.leaf_value(tot_a, tot_b, tot_n)
        for i, g in enumerate(active_nodes):
            value[g] = float(leaf_values[i])
            cover[g] = int(tot_n[i])

        can_split = criterion.splittable(tot_a, tot_n, min_samples_leaf)
        if depth >= max_depth or not can_split.any():
            break

        if features_per_split is not None and features_per_split < k:
            draw = feature_rng.random((m, k))
            order = np.argsort(draw, axis=1, kind="stable")
            allowed_mask = np.zeros((m, k), dtype=bool)
            np.put_along_axis(allowed_mask, order[:, :features_per_split], True, axis=1)
        else:
            allowed_mask = np.ones((m, k), dtype=bool)

        best = _NodeBest(m)
        considered = allowed_mask & can_split[:, None]
        for j in range(k):
            uniq = coded.uniques[j]
            nodes_j = considered[:, j]
            if uniq.shape[0] < 2 or not nodes_j.any():
                continue
            if nodes_j.all():
                codes_j = coded.codes[j][slot_rows]
                node_j, a_j, b_j = node_of, a_all, b_all
            else:
                # only slots whose node sampled this feature take part
                sub = np.flatnonzero(nodes_j[node_of])
                codes_j = coded.codes[j][slot_rows[sub]]
                node_j, a_j, b_j = node_of[sub], a_all[sub], b_all[sub]
            args = (codes_j, a_j, b_j, node_j, m, uniq, tot_a, tot_b, tot_n, criterion, min_samples_leaf)
            result = (
                _hist_best_split(*args) if uniq.shape[0] <= HIST_MAX_BINS else _sorted_best_split(*args)
            )
            if result is None:
                continue
            score_j, thr_j = result
            ok = nodes_j & np.isfinite(thr_j) & criterion.accept(score_j)
            best.update(j, score_j, thr_j, ok)

        split_mask = best.feature >= 0
        if not split_mask.any():
            if depth == 0 and warn_degenerate and criterion.kind == GINI:
                if 0 < tot_a[0] < tot_n[0]:
                    warnings.warn(
                        DegenerateDataWarning(
                            "no admissible split at the root with mixed labels; "
                            "model is a single majority-fraction leaf"
                        )
                    )
            break

        # materialize children for splitting nodes
        left_child = np.full(m, -1, dtype=np.int64)
        right_child = np.full(m, -1, dtype=np.int64)
        for i in np.flatnonzero(split_mask):
            g = int(active_nodes[i])
            feature_index[g] = int(best.feature[i])
            threshold[g] = float(best.threshold[i])
            gain[g] = float(criterion.recorded_gain(best.score[i], tot_n[i]))
            left_id = len(feature_index)
            right_id = left_id + 1
            left[g] = left_id
            right[g] = right_id
            left_child[i] = left_id
            right_child[i] = right_id
            for _ in range(2):
                feature_index.append(-1)
                threshold.append(np.nan)
                left.append(-1)
                right.append(-1)
                value.append(0.0)
                cover.append(0)
                gain.append(0.0)

        splitting_slots = split_mask[node_of]
        keep_rows = slot_rows[splitting_slots]
        keep_compact = node_of[splitting_slots]
        keep_a = a_all[splitting_slots]
        keep_b = b_all[splitting_slots]

        feat_per_slot = best.feature[keep_compact]
        thr_per_slot = best.threshold[keep_compact]
        goes_left = coded.values_at(keep_rows, feat_per_slot) < thr_per_slot

        slot_rows = keep_rows
        slot_node_global = np.where(goes_left, left_child[keep_compact], right_child[keep_compact])
        a_all = keep_a
        b_all = keep_b
        next_active = np.concatenate((left_child[split_mask], right_child[split_mask]))
        active_nodes = np.sort(next_active)
        depth += 1

    return FlatTree(
        feature_index=np.asarray(feature_index, dtype=np.int64),
        threshold=np.asarray(threshold, dtype=np.float64),
        left=np.asarray(left, dtype=np.int64),
        right=np.asarray(right, dtype=np.int64),
        value=np.asarray(value, dtype=np.float64),
        cover=np.asarray(cover, dtype=np.int64),
        gain=np.asarray(gain, dtype=np.float64),
    )


def gini_criterion() -> _Criterion:
    return _Criterion(kind=GINI)


def newton_criterion(reg_lambda: float) -> _Criterion:
    return _Criterion(kind=NEWTON, reg_lambda=reg_lambda)
