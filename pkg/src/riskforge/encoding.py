"""Feature encodings for the two model families.

Tree learners consume raw codes and numerics in schema order (codes are
ordinal there). Linear learners get standardized numerics and one-hot
expansion for categoricals with more than two codes; binary categoricals
stay a single 0/1 column.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .errors import SchemaMismatchError, ZeroVarianceWarning
from .schema import CATEGORICAL, NUMERIC, FeatureSchema


@dataclass(frozen=True)
class EncodedMatrix:
    """Dense design matrix plus labels and the encoder that produced it."""

    values: np.ndarray  # (n, m) float64
    labels: np.ndarray  # (n,)
    column_names: tuple[str, ...]
    encoder: "TreeEncoder | LinearEncoder"

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_columns(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class TreeEncoder:
    """Identity passthrough in schema order; invertible given the schema."""

    schema: FeatureSchema

    def transform(self, ds: Dataset) -> EncodedMatrix:
        if ds.schema != self.schema:
            raise SchemaMismatchError("dataset schema differs from encoder schema")
        return EncodedMatrix(
            values=ds.values.copy(),
            labels=ds.labels.copy(),
            column_names=self.schema.feature_names,
            encoder=self,
        )

    def transform_rows(self, rows: np.ndarray) -> np.ndarray:
        return np.asarray(rows, dtype=np.float64)

    def decode(self, matrix: EncodedMatrix) -> Dataset:
        return Dataset(schema=self.schema, values=matrix.values.copy(), labels=matrix.labels.copy())


@dataclass(frozen=True)
class LinearEncoder:
    """One-hot + standardization layout fitted on training statistics.

    ``groups[j]`` lists the encoded column indices owned by schema feature j,
    which is how per-column attributions fold back to feature vocabulary.
    """

    schema: FeatureSchema
    column_names: tuple[str, ...]
    groups: tuple[tuple[int, ...], ...]
    means: np.ndarray  # per encoded column; 0 for indicator columns
    scales: np.ndarray  # per encoded column; 1 for indicator columns
    constant_columns: tuple[str, ...] = ()
    _plan: tuple = field(init=False, repr=False, compare=False, hash=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_plan", _build_plan(self.schema))
        self.means.setflags(write=False)
        self.scales.setflags(write=False)

    @classmethod
    def fit(cls, ds: Dataset) -> "LinearEncoder":
        plan = _build_plan(ds.schema)
        raw = _expand(ds.values, plan)
        names = _column_names(ds.schema, plan)
        means = np.zeros(raw.shape[1])
        scales = np.ones(raw.shape[1])
        constant: list[str] = []
        for j, (kind, _, cols) in enumerate(plan):
            if kind != NUMERIC:
                continue
            col = cols[0]
            mu = float(raw[:, col].mean())
            sigma = float(raw[:, col].std())
            means[col] = mu
            if sigma == 0.0:
                constant.append(ds.schema.features[j].name)
                warnings.warn(
                    ZeroVarianceWarning(
                        f"numeric column {ds.schema.features[j].name!r} is constant; centering only"
                    )
                )
                scales[col] = 1.0
            else:
                scales[col] = sigma
        return cls(
            schema=ds.schema,
            column_names=names,
            groups=tuple(tuple(cols) for _, _, cols in plan),
            means=means,
            scales=scales,
            constant_columns=tuple(constant),
        )

    def transform(self, ds: Dataset) -> EncodedMatrix:
        if ds.schema != self.schema:
            raise SchemaMismatchError("dataset schema differs from encoder schema")
        return EncodedMatrix(
            values=self.transform_rows(ds.values),
            labels=ds.labels.copy(),
            column_names=self.column_names,
            encoder=self,
        )

    def transform_rows(self, rows: np.ndarray) -> np.ndarray:
        rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
        raw = _expand(rows, self._plan)
        return (raw - self.means) / self.scales


def _build_plan(schema: FeatureSchema) -> tuple:
    """Per feature: (kind, code list or None, encoded column indices)."""
    plan = []
    next_col = 0
    for spec in schema.features:
        if spec.kind == NUMERIC:
            plan.append((NUMERIC, None, (next_col,)))
            next_col += 1
        elif set(spec.codes) == {0, 1}:
            plan.append(("binary", None, (next_col,)))
            next_col += 1
        else:
            codes = tuple(sorted(spec.codes))
            cols = tuple(range(next_col, next_col + len(codes)))
            plan.append((CATEGORICAL, codes, cols))
            next_col += len(codes)
    return tuple(plan)


def _column_names(schema: FeatureSchema, plan: tuple) -> tuple[str, ...]:
    names: list[str] = []
    for spec, (kind, codes, _) in zip(schema.features, plan):
        if kind == CATEGORICAL:
            names.extend(f"{spec.name}={code}" for code in codes)
        else:
            names.append(spec.name)
    return tuple(names)


def _expand(rows: np.ndarray, plan: tuple) -> np.ndarray:
    n = rows.shape[0]
    width = plan[-1][2][-1] + 1 if plan else 0
    out = np.zeros((n, width), dtype=np.float64)
    for j, (kind, codes, cols) in enumerate(plan):
        if kind == CATEGORICAL:
            col_values = rows[:, j].astype(np.int64)
            for code, col in zip(codes, cols):
                out[:, col] = col_values == code
        else:
            out[:, cols[0]] = rows[:, j]
    return out


def encode_for_trees(ds: Dataset) -> EncodedMatrix:
    """Raw codes and numerics as reals, column order equal to schema order."""
    return TreeEncoder(schema=ds.schema).transform(ds)


def encode_for_linear(ds: Dataset) -> EncodedMatrix:
    """Fit standardization/one-hot on ``ds`` and return its encoded matrix."""
    return LinearEncoder.fit(ds).transform(ds)
