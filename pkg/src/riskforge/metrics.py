"""Classification metrics: confusion counts, precision/recall/F-beta, AUC.

AUC is computed in rank-statistic form (average rank of positives with
mid-ranks on ties); a trapezoidal ROC integration lives alongside as the
independent cross-check and the two must agree to 1e-12.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import SingleClassError, TooFewRowsError


@dataclass(frozen=True)
class ConfusionTable:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.total


@dataclass(frozen=True)
class MetricsRow:
    """One model's metrics on one evaluation set."""

    accuracy: float
    precision: float
    recall: float
    f_beta: float
    auc: float
    beta: float = 1.0
    undefined_precision: bool = False
    undefined_recall: bool = False


def confusion_matrix(y_true, y_pred) -> ConfusionTable:
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape or y_true.ndim != 1 or y_true.size == 0:
        raise TooFewRowsError("confusion_matrix needs two equal-length non-empty vectors")
    if not (np.isin(y_true, (0, 1)).all() and np.isin(y_pred, (0, 1)).all()):
        raise ValueError("confusion_matrix entries must be binary")
    tp = int(((y_true == 1) & (y_pred == 1)).sum())
    fp = int(((y_true == 0) & (y_pred == 1)).sum())
    tn = int(((y_true == 0) & (y_pred == 0)).sum())
    fn = int(((y_true == 1) & (y_pred == 0)).sum())
    return ConfusionTable(tp=tp, fp=fp, tn=tn, fn=fn)


def precision_recall_f(ct: ConfusionTable, beta: float = 1.0):
    """Returns (precision, recall, f_beta, flags).

    Division-by-zero policy: an undefined metric is reported as 0.0 and
    flagged, never as NaN.
    """
    flags = {"undefined_precision": False, "undefined_recall": False}
    if ct.tp + ct.fp == 0:
        precision = 0.0
        flags["undefined_precision"] = True
    else:
        precision = ct.tp / (ct.tp + ct.fp)
    if ct.tp + ct.fn == 0:
        recall = 0.0
        flags["undefined_recall"] = True
    else:
        recall = ct.tp / (ct.tp + ct.fn)
    denom = beta * beta * precision + recall
    f_beta = 0.0 if denom == 0.0 else (1.0 + beta * beta) * precision * recall / denom
    return precision, recall, f_beta, flags


def roc_auc(y_true, scores) -> float:
    """Mann-Whitney form: mean positive rank with average ranks on ties."""
    y_true = np.asarray(y_true)
    scores = np.asarray(scores, dtype=np.float64)
    n_pos = int((y_true == 1).sum())
    n_neg = int((y_true == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise SingleClassError("roc_auc needs both classes present")
    ranks = rankdata(scores, method="average")
    rank_sum = float(ranks[y_true == 1].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def roc_auc_trapezoid(y_true, scores) -> float:
    """Trapezoidal area under the ROC curve; the dual-route cross-check."""
    y_true = np.asarray(y_true)
    scores = np.asarray(scores, dtype=np.float64)
    n_pos = int((y_true == 1).sum())
    n_neg = int((y_true == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise SingleClassError("roc_auc needs both classes present")
    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_true = y_true[order]
    # merge tied-score runs so ties contribute a single diagonal segment
    distinct = np.flatnonzero(np.diff(sorted_scores)) + 1
    boundaries = np.concatenate(([0], distinct, [scores.size]))
    tps = fps = 0
    area = 0.0
    prev_tpr = prev_fpr = 0.0
    for lo, hi in zip(boundaries[:-1], boundaries[1:]):
        tps += int((sorted_true[lo:hi] == 1).sum())
        fps += int((sorted_true[lo:hi] == 0).sum())
        tpr = tps / n_pos
        fpr = fps / n_neg
        area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0
        prev_tpr, prev_fpr = tpr, fpr
    return area
