"""Descriptive analyses: class-conditional moments, group counts, term
frequencies, and the Spearman correlation matrix.

All operations are pure over immutable datasets. Standard deviations are
population (ddof=0) throughout, matching how moments feed the augmentation
fidelity tolerance.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
from scipy.stats import rankdata

from .dataset import Dataset
from .errors import (
    ConstantColumnWarning,
    NotCategoricalError,
    SingleClassError,
    TooFewRowsError,
    UnknownColumnError,
    UnknownFeatureError,
)
from .schema import CATEGORICAL

SUICIDE = 1
NOT_SUICIDE = 0

_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")
_MIN_TOKEN_LEN = 3


@dataclass(frozen=True)
class ClassMoments:
    """(mean, population std) per feature per class."""

    feature_names: tuple[str, ...]
    # moments[name][class_label] = (mean, std)
    moments: dict[str, dict[int, tuple[float, float]]]

    def mean(self, feature: str, label: int) -> float:
        return self.moments[feature][label][0]

    def std(self, feature: str, label: int) -> float:
        return self.moments[feature][label][1]


@dataclass(frozen=True)
class GroupCount:
    code: int
    label: str
    suicide_count: int
    nonsuicide_count: int


@dataclass(frozen=True)
class TermFrequencies:
    """(term, count) sorted by count descending then term ascending."""

    terms: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class CorrelationMatrix:
    names: tuple[str, ...]
    values: np.ndarray  # symmetric, unit diagonal, entries in [-1, 1]
    constant_columns: tuple[str, ...] = ()

    def __post_init__(self):
        self.values.setflags(write=False)

    def entry(self, a: str, b: str) -> float:
        ia, ib = self.names.index(a), self.names.index(b)
        return float(self.values[ia, ib])

    def row(self, name: str) -> dict[str, float]:
        i = self.names.index(name)
        return {other: float(v) for other, v in zip(self.names, self.values[i])}


def class_conditional_moments(ds: Dataset, features: list[str] | None = None) -> ClassMoments:
    """Per (feature, class) mean and population std."""
    if features is None:
        features = list(ds.schema.feature_names)
    for name in features:
        if name not in ds.schema.feature_names:
            raise UnknownFeatureError(f"unknown feature {name!r}")
    classes = np.unique(ds.labels)
    if classes.size < 2:
        raise SingleClassError("class_conditional_moments needs both classes present")
    out: dict[str, dict[int, tuple[float, float]]] = {}
    for name in features:
        col = ds.column(name)
        per_class: dict[int, tuple[float, float]] = {}
        for label in (NOT_SUICIDE, SUICIDE):
            sub = col[ds.labels == label]
            per_class[label] = (float(sub.mean()), float(sub.std()))
        out[name] = per_class
    return ClassMoments(feature_names=tuple(features), moments=out)


def group_label_counts(ds: Dataset, feature: str) -> list[GroupCount]:
    """Per declared code: suicide / non-suicide row counts (zero-filled)."""
    if feature not in ds.schema.feature_names:
        raise UnknownFeatureError(f"unknown feature {feature!r}")
    spec = ds.schema.spec(feature)
    if spec.kind != CATEGORICAL:
        raise NotCategoricalError(f"feature {feature!r} is not categorical")
    col = ds.column(feature).astype(np.int64)
    rows = []
    for code, label in spec.categories:
        mask = col == code
        rows.append(
            GroupCount(
                code=code,
                label=label,
                suicide_count=int((ds.labels[mask] == SUICIDE).sum()),
                nonsuicide_count=int((ds.labels[mask] == NOT_SUICIDE).sum()),
            )
        )
    return rows


def default_stopwords() -> frozenset[str]:
    text = resources.files("riskforge.data").joinpath("stopwords.txt").read_text(encoding="utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def tokenize(text: str, stopwords: frozenset[str]) -> list[str]:
    tokens = _TOKEN_SPLIT.split(text.lower())
    return [t for t in tokens if len(t) >= _MIN_TOKEN_LEN and t not in stopwords]


def term_frequencies(
    ds: Dataset,
    text_column: str,
    top_n: int = 50,
    stopwords: frozenset[str] | None = None,
) -> TermFrequencies:
    """Top-n unigram counts over a declared text column."""
    if text_column not in ds.schema.text_columns:
        raise UnknownColumnError(f"{text_column!r} is not a declared text column")
    if stopwords is None:
        stopwords = default_stopwords()
    counts: dict[str, int] = {}
    for entry in ds.text_values.get(text_column, ()):
        for token in tokenize(entry, stopwords):
            counts[token] = counts.get(token, 0) + 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return TermFrequencies(terms=tuple(ranked[:top_n]))


def spearman_matrix(ds: Dataset, include_label: bool = True) -> CorrelationMatrix:
    """Rank every column with average ties, then Pearson on the ranks.

    Constant columns get correlation 0 against everything (flagged), keeping
    the matrix finite for rendering.
    """
    if ds.n_rows < 2:
        raise TooFewRowsError("spearman_matrix needs at least 2 rows")
    names = list(ds.schema.feature_names)
    columns = [ds.values[:, j] for j in range(ds.n_features)]
    if include_label:
        names.append(ds.schema.label_name)
        columns.append(ds.labels.astype(np.float64))

    ranks = np.column_stack([rankdata(c, method="average") for c in columns])
    stds = ranks.std(axis=0)
    constant = stds == 0.0
    constant_names = tuple(n for n, c in zip(names, constant) if c)
    if constant_names:
        warnings.warn(
            ConstantColumnWarning(f"constant columns set to zero correlation: {constant_names}")
        )

    centered = ranks - ranks.mean(axis=0)
    safe_stds = np.where(constant, 1.0, stds)
    normalized = centered / safe_stds
    matrix = normalized.T @ normalized / ds.n_rows
    matrix[constant, :] = 0.0
    matrix[:, constant] = 0.0
    np.fill_diagonal(matrix, 1.0)
    matrix = np.clip(matrix, -1.0, 1.0)
    return CorrelationMatrix(names=tuple(names), values=matrix, constant_columns=constant_names)
