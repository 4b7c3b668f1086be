"""Feature schema declarations and their on-disk JSON form.

A schema is always an explicit, versioned file: column semantics are pinned
by the author of the dataset, never inferred per run. Feature order in the
schema defines the feature index used by every downstream component.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MissingInputError, SchemaError, VersionMismatchError

SCHEMA_FORMAT_VERSION = 1

NUMERIC = "numeric"
CATEGORICAL = "categorical"


@dataclass(frozen=True)
class FeatureSpec:
    """One column declaration: a numeric range or a closed code book."""

    name: str
    kind: str
    categories: tuple[tuple[int, str], ...] | None = None
    numeric_range: tuple[float, float] | None = None

    def __post_init__(self):
        if not self.name:
            raise SchemaError("feature name must be non-empty")
        if self.kind not in (NUMERIC, CATEGORICAL):
            raise SchemaError(f"feature {self.name!r}: unknown kind {self.kind!r}")
        if self.kind == CATEGORICAL:
            if not self.categories:
                raise SchemaError(f"feature {self.name!r}: categorical needs categories")
            codes = [c for c, _ in self.categories]
            if len(set(codes)) != len(codes):
                raise SchemaError(f"feature {self.name!r}: duplicate category codes")
            if any(c < 0 for c in codes):
                raise SchemaError(f"feature {self.name!r}: negative category code")
        else:
            if self.categories is not None:
                raise SchemaError(f"feature {self.name!r}: numeric cannot carry categories")
            if self.numeric_range is not None:
                lo, hi = self.numeric_range
                if not lo <= hi:
                    raise SchemaError(f"feature {self.name!r}: numeric_range min > max")

    @property
    def codes(self) -> tuple[int, ...]:
        return tuple(c for c, _ in self.categories) if self.categories else ()

    def label_for(self, code: int) -> str:
        for c, label in self.categories or ():
            if c == code:
                return label
        raise SchemaError(f"feature {self.name!r}: undeclared code {code}")


@dataclass(frozen=True)
class FeatureSchema:
    """Ordered feature declarations plus the label and any free-text columns."""

    features: tuple[FeatureSpec, ...]
    label_name: str
    text_columns: tuple[str, ...] = ()
    _index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False, default=None)

    def __post_init__(self):
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            raise SchemaError("feature names must be unique")
        if self.label_name in names:
            raise SchemaError("label_name collides with a feature name")
        reserved = set(names) | {self.label_name}
        for col in self.text_columns:
            if col in reserved:
                raise SchemaError(f"text column {col!r} collides with a feature or the label")
        object.__setattr__(self, "_index", {n: j for j, n in enumerate(names)})

    def __len__(self) -> int:
        return len(self.features)

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise SchemaError(f"unknown feature {name!r}") from None

    def spec(self, name: str) -> FeatureSpec:
        return self.features[self.index_of(name)]

    def is_binary(self, name: str) -> bool:
        s = self.spec(name)
        return s.kind == CATEGORICAL and set(s.codes) == {0, 1}

    def to_dict(self) -> dict:
        return {
            "format_version": SCHEMA_FORMAT_VERSION,
            "label_name": self.label_name,
            "text_columns": list(self.text_columns),
            "features": [
                {
                    "name": f.name,
                    "kind": f.kind,
                    "categories": [[c, label] for c, label in f.categories] if f.categories else None,
                    "numeric_range": list(f.numeric_range) if f.numeric_range else None,
                }
                for f in self.features
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "FeatureSchema":
        version = doc.get("format_version")
        if version != SCHEMA_FORMAT_VERSION:
            raise VersionMismatchError(
                f"schema format_version {version!r} unsupported (expected {SCHEMA_FORMAT_VERSION})"
            )
        features = []
        for item in doc.get("features", []):
            features.append(
                FeatureSpec(
                    name=item["name"],
                    kind=item["kind"],
                    categories=tuple((int(c), str(label)) for c, label in item["categories"])
                    if item.get("categories")
                    else None,
                    numeric_range=tuple(float(v) for v in item["numeric_range"])
                    if item.get("numeric_range")
                    else None,
                )
            )
        return cls(
            features=tuple(features),
            label_name=doc["label_name"],
            text_columns=tuple(doc.get("text_columns", [])),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "FeatureSchema":
        p = Path(path)
        if not p.exists():
            raise MissingInputError(f"schema file not found: {p}")
        try:
            doc = json.loads(p.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"schema file {p} is not valid JSON: {exc}") from exc
        return cls.from_dict(doc)

    def fingerprint(self) -> str:
        """Stable digest of the schema content, recorded in model artifacts."""
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
