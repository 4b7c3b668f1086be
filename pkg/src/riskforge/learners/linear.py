"""Linear-margin families: logistic regression, perceptron, hinge-loss SVM.

All three share the LinearModel container. Scores are sigmoid(margin): the
true class probability for logistic, and a rank-preserving squash for the
margin families (AUC and thresholding only need the order).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ..encoding import EncodedMatrix, LinearEncoder
from ..errors import NonConvergenceWarning
from .boosting import sigmoid

LOGISTIC = "logistic"
PERCEPTRON = "perceptron"
HINGE = "hinge"


@dataclass(frozen=True)
class LinearModel:
    """Weights over encoded columns plus the encoder that defines them."""

    weights: np.ndarray
    bias: float
    kind: str
    encoder: LinearEncoder
    converged: bool = True
    objective_curve: tuple[float, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not np.isfinite(self.weights).all() or not np.isfinite(self.bias):
            raise ValueError("linear model weights must be finite")
        self.weights.setflags(write=False)

    def margin_encoded(self, Xenc: np.ndarray) -> np.ndarray:
        return Xenc @ self.weights + self.bias

    def predict_margin(self, X_raw: np.ndarray) -> np.ndarray:
        return self.margin_encoded(self.encoder.transform_rows(X_raw))

    def predict_score(self, X_raw: np.ndarray) -> np.ndarray:
        return sigmoid(self.predict_margin(X_raw))


def _logistic_loss(w, b, X, y, l2):
    margins = X @ w + b
    data = float(np.mean(np.logaddexp(0.0, margins) - y * margins))
    return data + 0.5 * l2 * float(w @ w)


def train_logistic_regression(train: EncodedMatrix, cfg=None) -> LinearModel:
    """Full-batch gradient descent on L2-regularized log-loss.

    The step halves whenever a trial step raises the loss; stops on the
    gradient-norm tolerance or the epoch budget (then returns the best
    iterate with a non-convergence flag).
    """
    from .config import TrainConfig

    cfg = cfg or TrainConfig()
    X = train.values
    y = train.labels.astype(np.float64)
    n, m = X.shape
    w = np.zeros(m)
    b = 0.0
    step = cfg.lr_step
    loss = _logistic_loss(w, b, X, y, cfg.lr_l2)
    best = (loss, w.copy(), b)
    converged = False
    for _ in range(cfg.lr_max_epochs):
        p = sigmoid(X @ w + b)
        grad_w = X.T @ (p - y) / n + cfg.lr_l2 * w
        grad_b = float(np.mean(p - y))
        gnorm = float(np.sqrt(grad_w @ grad_w + grad_b * grad_b))
        if gnorm <= cfg.lr_tolerance:
            converged = True
            break
        trial_w = w - step * grad_w
        trial_b = b - step * grad_b
        trial_loss = _logistic_loss(trial_w, trial_b, X, y, cfg.lr_l2)
        if trial_loss > loss:
            step *= 0.5
            continue
        w, b, loss = trial_w, trial_b, trial_loss
        if loss < best[0]:
            best = (loss, w.copy(), b)
    if not converged:
        warnings.warn(
            NonConvergenceWarning("logistic regression hit max_epochs before tolerance")
        )
        _, w, b = best
    return LinearModel(
        weights=w, bias=float(b), kind=LOGISTIC, encoder=train.encoder, converged=converged
    )


def train_perceptron(train: EncodedMatrix, cfg=None) -> LinearModel:
    """Classic mistake-driven updates, exactly ``perceptron_passes`` passes.

    Row order is reshuffled per (seed, epoch); zero passes leave zero weights
    (score 0.5 everywhere).
    """
    from .config import TrainConfig

    cfg = cfg or TrainConfig()
    X = np.ascontiguousarray(train.values)
    y_signed = np.where(train.labels > 0, 1.0, -1.0)
    n, m = X.shape
    w = np.zeros(m)
    b = 0.0
    for epoch in range(cfg.perceptron_passes):
        order = np.random.default_rng((cfg.seed, epoch)).permutation(n)
        for i in order:
            if y_signed[i] * (X[i] @ w + b) <= 0.0:
                w += y_signed[i] * X[i]
                b += y_signed[i]
    return LinearModel(weights=w, bias=float(b), kind=PERCEPTRON, encoder=train.encoder)


def _hinge_objective(w, b, X, y_signed, lam):
    margins = y_signed * (X @ w + b)
    hinge = np.maximum(0.0, 1.0 - margins)
    return float(lam / 2.0 * (w @ w) + hinge.mean())


def train_linear_svm(train: EncodedMatrix, cfg=None) -> LinearModel:
    """Primal full-batch subgradient descent with step 1/(lambda * t).

    The returned model is the average of the per-epoch iterates; the
    objective of that average is what the convergence flag tracks.
    """
    from .config import TrainConfig

    cfg = cfg or TrainConfig()
    X = train.values
    y_signed = np.where(train.labels > 0, 1.0, -1.0)
    n, m = X.shape
    lam = cfg.svm_lambda
    w = np.zeros(m)
    b = 0.0
    w_sum = np.zeros(m)
    b_sum = 0.0
    curve: list[float] = []
    for t in range(1, cfg.svm_epochs + 1):
        eta = 1.0 / (lam * t)
        margins = y_signed * (X @ w + b)
        violators = margins < 1.0
        push_w = (y_signed[violators, None] * X[violators]).sum(axis=0) / n
        push_b = float(y_signed[violators].sum()) / n
        w = (1.0 - eta * lam) * w + eta * push_w
        b = b + eta * push_b
        w_sum += w
        b_sum += b
        curve.append(_hinge_objective(w_sum / t, b_sum / t, X, y_signed, lam))
    w_avg = w_sum / cfg.svm_epochs
    b_avg = b_sum / cfg.svm_epochs
    converged = True
    if len(curve) >= 2:
        rel = abs(curve[-1] - curve[-2]) / max(abs(curve[-2]), 1e-12)
        converged = rel <= 1e-6
    if not converged:
        warnings.warn(NonConvergenceWarning("svm objective still moving at the epoch budget"))
    return LinearModel(
        weights=w_avg,
        bias=float(b_avg),
        kind=HINGE,
        encoder=train.encoder,
        converged=converged,
        objective_curve=tuple(curve),
    )
