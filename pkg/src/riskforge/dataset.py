"""Typed tabular dataset: CSV ingestion, imputation, stratified splitting.

Feature values live in a read-only float64 matrix in schema column order;
categorical codes are stored as (integral) floats. Missing cells are NaN
until :func:`impute` runs. Text columns ride alongside and never enter the
feature matrix.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    AllMissingColumnError,
    CellValueError,
    DegenerateSplitError,
    EmptyDatasetError,
    MissingColumnError,
    MissingInputError,
    SchemaMismatchError,
    SingleClassError,
)
from .schema import CATEGORICAL, NUMERIC, FeatureSchema

MISSING_TOKENS = ("", "?")


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Dataset:
    """Immutable rows + binary labels under a fixed schema."""

    schema: FeatureSchema
    values: np.ndarray  # (n, k) float64, categorical codes as floats
    labels: np.ndarray  # (n,) int64 in {0, 1}
    text_values: dict[str, tuple[str, ...]] = field(default_factory=dict)
    ignored_columns: tuple[str, ...] = ()
    imputed_counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        values = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        labels = np.asarray(self.labels, dtype=np.int64)
        if values.ndim != 2 or values.shape[1] != len(self.schema):
            raise SchemaMismatchError(
                f"values shape {values.shape} does not match schema width {len(self.schema)}"
            )
        if labels.shape != (values.shape[0],):
            raise SchemaMismatchError("labels length does not match row count")
        if labels.size and not np.isin(labels, (0, 1)).all():
            raise CellValueError("labels must be binary 0/1")
        for col, vals in self.text_values.items():
            if col not in self.schema.text_columns:
                raise SchemaMismatchError(f"text column {col!r} not declared in schema")
            if len(vals) != values.shape[0]:
                raise SchemaMismatchError(f"text column {col!r} length mismatch")
        object.__setattr__(self, "values", _freeze(values))
        object.__setattr__(self, "labels", _freeze(labels))

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    @property
    def has_missing(self) -> bool:
        return bool(np.isnan(self.values).any())

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.schema.index_of(name)]

    def class_rows(self, label: int) -> np.ndarray:
        return self.values[self.labels == label]

    def take(self, indices: np.ndarray) -> "Dataset":
        indices = np.asarray(indices)
        return Dataset(
            schema=self.schema,
            values=self.values[indices].copy(),
            labels=self.labels[indices].copy(),
            text_values={c: tuple(np.asarray(v, dtype=object)[indices]) for c, v in self.text_values.items()},
        )

    def replace(self, **kwargs) -> "Dataset":
        base = {
            "schema": self.schema,
            "values": self.values,
            "labels": self.labels,
            "text_values": self.text_values,
            "ignored_columns": self.ignored_columns,
            "imputed_counts": self.imputed_counts,
        }
        base.update(kwargs)
        return Dataset(**base)


@dataclass(frozen=True)
class SplitPair:
    """Disjoint stratified train/test partition of one dataset."""

    train: Dataset
    test: Dataset
    seed: int
    test_fraction: float


def _parse_cell(raw: str, spec, row_number: int) -> float:
    text = raw.strip()
    if text in MISSING_TOKENS:
        return np.nan
    if spec.kind == CATEGORICAL:
        try:
            code = int(float(text))
        except ValueError:
            raise CellValueError(
                f"row {row_number}, column {spec.name!r}: {raw!r} is not an integer code",
                row=row_number,
                column=spec.name,
            ) from None
        if float(code) != float(text) or code not in spec.codes:
            raise CellValueError(
                f"row {row_number}, column {spec.name!r}: undeclared categorical code {raw!r}",
                row=row_number,
                column=spec.name,
            )
        return float(code)
    try:
        return float(text)
    except ValueError:
        raise CellValueError(
            f"row {row_number}, column {spec.name!r}: {raw!r} is not numeric",
            row=row_number,
            column=spec.name,
        ) from None


def load_csv(path: str | Path, schema: FeatureSchema) -> Dataset:
    """Parse an RFC-4180 CSV (UTF-8, header required) under the schema.

    Unknown columns are ignored and reported on ``Dataset.ignored_columns``;
    ``?`` or an empty cell marks a missing value. Row order is preserved.
    """
    p = Path(path)
    if not p.exists():
        raise MissingInputError(f"CSV file not found: {p}")
    with p.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDatasetError(f"{p} is empty (no header row)") from None
        header = [h.strip() for h in header]
        positions = {name: i for i, name in enumerate(header)}
        needed = list(schema.feature_names) + [schema.label_name] + list(schema.text_columns)
        for name in needed:
            if name not in positions:
                raise MissingColumnError(f"column {name!r} missing from {p}")
        ignored = tuple(h for h in header if h not in set(needed))

        k = len(schema)
        rows: list[list[float]] = []
        labels: list[int] = []
        text: dict[str, list[str]] = {c: [] for c in schema.text_columns}
        label_pos = positions[schema.label_name]
        feature_pos = [positions[f.name] for f in schema.features]
        for row_number, record in enumerate(reader, start=1):
            if not record or all(not cell.strip() for cell in record):
                continue
            if len(record) < len(header):
                record = record + [""] * (len(header) - len(record))
            parsed = [
                _parse_cell(record[pos], spec, row_number)
                for pos, spec in zip(feature_pos, schema.features)
            ]
            raw_label = record[label_pos].strip()
            if raw_label in MISSING_TOKENS:
                raise CellValueError(
                    f"row {row_number}: missing label", row=row_number, column=schema.label_name
                )
            try:
                lab = int(float(raw_label))
            except ValueError:
                lab = -1
            if lab not in (0, 1):
                raise CellValueError(
                    f"row {row_number}, column {schema.label_name!r}: label {raw_label!r} is not 0/1",
                    row=row_number,
                    column=schema.label_name,
                )
            rows.append(parsed)
            labels.append(lab)
            for col in schema.text_columns:
                text[col].append(record[positions[col]])
    if not rows:
        raise EmptyDatasetError(f"{p} contains a header but no data rows")
    return Dataset(
        schema=schema,
        values=np.asarray(rows, dtype=np.float64).reshape(len(rows), k),
        labels=np.asarray(labels, dtype=np.int64),
        text_values={c: tuple(v) for c, v in text.items()},
        ignored_columns=ignored,
    )


def _format_value(value: float, kind: str) -> str:
    if np.isnan(value):
        return "?"
    if kind == CATEGORICAL:
        return str(int(value))
    return repr(float(value))


def write_csv(ds: Dataset, path: str | Path) -> None:
    """Write the dataset back to CSV; floats use shortest round-trip form."""
    p = Path(path)
    with p.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = list(ds.schema.feature_names) + [ds.schema.label_name] + list(ds.schema.text_columns)
        writer.writerow(header)
        kinds = [f.kind for f in ds.schema.features]
        for i in range(ds.n_rows):
            row = [_format_value(v, kind) for v, kind in zip(ds.values[i], kinds)]
            row.append(str(int(ds.labels[i])))
            for col in ds.schema.text_columns:
                values = ds.text_values.get(col)
                row.append(values[i] if values is not None else "")
            writer.writerow(row)


def impute(ds: Dataset) -> Dataset:
    """Fill missing numerics with the column median, categoricals with the mode.

    Mode ties break toward the smallest code. Per-column replacement counts are
    reported on ``imputed_counts``. Idempotent; a complete dataset is returned
    unchanged.
    """
    if not ds.has_missing:
        return ds
    values = ds.values.copy()
    counts: dict[str, int] = {}
    for j, spec in enumerate(ds.schema.features):
        col = values[:, j]
        missing = np.isnan(col)
        n_missing = int(missing.sum())
        if n_missing == 0:
            continue
        observed = col[~missing]
        if observed.size == 0:
            raise AllMissingColumnError(f"column {spec.name!r} has no observed values")
        if spec.kind == NUMERIC:
            fill = float(np.median(observed))
        else:
            codes, freq = np.unique(observed.astype(np.int64), return_counts=True)
            fill = float(codes[np.argmax(freq)])  # unique() sorts, argmax takes first max
        col[missing] = fill
        counts[spec.name] = n_missing
    return ds.replace(values=values, imputed_counts=counts)


def imputation_defaults(ds: Dataset) -> dict[str, float]:
    """Median/mode fill value per feature, from a complete dataset."""
    out: dict[str, float] = {}
    for j, spec in enumerate(ds.schema.features):
        col = ds.values[:, j]
        col = col[~np.isnan(col)]
        if col.size == 0:
            raise AllMissingColumnError(f"column {spec.name!r} has no observed values")
        if spec.kind == NUMERIC:
            out[spec.name] = float(np.median(col))
        else:
            codes, freq = np.unique(col.astype(np.int64), return_counts=True)
            out[spec.name] = float(codes[np.argmax(freq)])
    return out


def stratified_split(ds: Dataset, test_fraction: float, seed: int) -> SplitPair:
    """Deterministic per-class split; test takes round(class_count * fraction) rows."""
    if not 0.0 < test_fraction < 1.0:
        raise DegenerateSplitError(f"test_fraction {test_fraction} outside (0, 1)")
    classes = np.unique(ds.labels)
    if classes.size < 2:
        raise SingleClassError("stratified_split needs both classes present")
    rng = np.random.default_rng(seed)
    test_idx: list[np.ndarray] = []
    train_idx: list[np.ndarray] = []
    for cls in classes:
        members = np.flatnonzero(ds.labels == cls)
        n_test = int(round(members.size * test_fraction))
        if n_test < 1 or n_test >= members.size:
            raise DegenerateSplitError(
                f"class {cls}: fraction {test_fraction} leaves an empty part "
                f"({members.size} rows, {n_test} to test)"
            )
        order = rng.permutation(members.size)
        test_idx.append(members[order[:n_test]])
        train_idx.append(members[order[n_test:]])
    test_rows = np.sort(np.concatenate(test_idx))
    train_rows = np.sort(np.concatenate(train_idx))
    return SplitPair(
        train=ds.take(train_rows),
        test=ds.take(test_rows),
        seed=seed,
        test_fraction=test_fraction,
    )
