"""Portable model artifacts: versioned JSON with exact float round-trip.

An artifact embeds everything a scoring service needs: the model payload as
flat arrays, the schema it was trained against (with fingerprint), the train
config, optional metrics, a background sample for attribution, and imputation
defaults for incomplete records. Loading reproduces bit-identical predictions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..encoding import LinearEncoder
from ..errors import FingerprintMismatchError, MissingInputError, VersionMismatchError
from ..schema import FeatureSchema
from .boosting import BoostedModel
from .config import TrainConfig
from .forest import ForestModel
from .linear import LinearModel
from .tree_engine import FlatTree
from .trees import TreeModel

ARTIFACT_FORMAT_VERSION = 1

FAMILY_DT = "decision_tree"
FAMILY_RF = "random_forest"
FAMILY_GBT = "gradient_boosted"
FAMILY_LOGISTIC = "logistic_regression"
FAMILY_PERCEPTRON = "perceptron"
FAMILY_SVM = "linear_svm"

_LINEAR_FAMILIES = {FAMILY_LOGISTIC: "logistic", FAMILY_PERCEPTRON: "perceptron", FAMILY_SVM: "hinge"}


def family_of(model) -> str:
    if isinstance(model, TreeModel):
        return FAMILY_DT
    if isinstance(model, ForestModel):
        return FAMILY_RF
    if isinstance(model, BoostedModel):
        return FAMILY_GBT
    if isinstance(model, LinearModel):
        for family, kind in _LINEAR_FAMILIES.items():
            if model.kind == kind:
                return family
    raise TypeError(f"unsupported model type {type(model).__name__}")


@dataclass(frozen=True)
class ModelArtifact:
    """A loaded (or about-to-be-saved) model plus its provenance."""

    model: object
    family: str
    schema: FeatureSchema
    train_config: TrainConfig
    metrics: dict | None = None
    background: np.ndarray | None = None  # raw-space rows for attribution
    imputation_defaults: dict[str, float] | None = None
    format_version: int = ARTIFACT_FORMAT_VERSION

    @property
    def schema_fingerprint(self) -> str:
        return self.schema.fingerprint()


def _model_payload(model) -> dict:
    if isinstance(model, TreeModel):
        return {"tree": model.tree.to_arrays(), "leaf_semantics": model.leaf_semantics}
    if isinstance(model, ForestModel):
        return {
            "trees": [t.to_arrays() for t in model.trees],
            "tree_seeds": [list(s) for s in model.tree_seeds],
            "features_per_split": model.features_per_split,
        }
    if isinstance(model, BoostedModel):
        return {
            "trees": [t.to_arrays() for t in model.trees],
            "base_margin": model.base_margin,
            "learning_rate": model.learning_rate,
            "reg_lambda": model.reg_lambda,
            "link": model.link,
        }
    if isinstance(model, LinearModel):
        enc = model.encoder
        return {
            "weights": model.weights.tolist(),
            "bias": model.bias,
            "kind": model.kind,
            "converged": model.converged,
            "encoder": {
                "column_names": list(enc.column_names),
                "groups": [list(g) for g in enc.groups],
                "means": enc.means.tolist(),
                "scales": enc.scales.tolist(),
                "constant_columns": list(enc.constant_columns),
            },
        }
    raise TypeError(f"unsupported model type {type(model).__name__}")


def _model_from_payload(family: str, payload: dict, schema: FeatureSchema):
    names = schema.feature_names
    if family == FAMILY_DT:
        return TreeModel(
            tree=FlatTree.from_arrays(payload["tree"]),
            leaf_semantics=payload["leaf_semantics"],
            feature_names=names,
        )
    if family == FAMILY_RF:
        return ForestModel(
            trees=tuple(FlatTree.from_arrays(t) for t in payload["trees"]),
            tree_seeds=tuple(tuple(s) for s in payload["tree_seeds"]),
            features_per_split=int(payload["features_per_split"]),
            feature_names=names,
        )
    if family == FAMILY_GBT:
        return BoostedModel(
            trees=tuple(FlatTree.from_arrays(t) for t in payload["trees"]),
            base_margin=float(payload["base_margin"]),
            learning_rate=float(payload["learning_rate"]),
            reg_lambda=float(payload["reg_lambda"]),
            feature_names=names,
            link=payload.get("link", "logistic"),
        )
    if family in _LINEAR_FAMILIES:
        enc_doc = payload["encoder"]
        encoder = LinearEncoder(
            schema=schema,
            column_names=tuple(enc_doc["column_names"]),
            groups=tuple(tuple(g) for g in enc_doc["groups"]),
            means=np.asarray(enc_doc["means"], dtype=np.float64),
            scales=np.asarray(enc_doc["scales"], dtype=np.float64),
            constant_columns=tuple(enc_doc["constant_columns"]),
        )
        return LinearModel(
            weights=np.asarray(payload["weights"], dtype=np.float64),
            bias=float(payload["bias"]),
            kind=payload["kind"],
            encoder=encoder,
            converged=bool(payload.get("converged", True)),
        )
    raise VersionMismatchError(f"unknown model family {family!r}")


def save_artifact(
    model,
    path: str | Path,
    schema: FeatureSchema,
    train_config: TrainConfig | None = None,
    metrics: dict | None = None,
    background: np.ndarray | None = None,
    imputation_defaults: dict[str, float] | None = None,
) -> ModelArtifact:
    artifact = ModelArtifact(
        model=model,
        family=family_of(model),
        schema=schema,
        train_config=train_config or TrainConfig(),
        metrics=metrics,
        background=None if background is None else np.asarray(background, dtype=np.float64),
        imputation_defaults=imputation_defaults,
    )
    doc = {
        "format_version": ARTIFACT_FORMAT_VERSION,
        "family": artifact.family,
        "schema": schema.to_dict(),
        "schema_fingerprint": schema.fingerprint(),
        "train_config": artifact.train_config.to_dict(),
        "metrics": metrics,
        "background": artifact.background.tolist() if artifact.background is not None else [],
        "imputation_defaults": imputation_defaults,
        "payload": _model_payload(model),
    }
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    return artifact


def load_artifact(path: str | Path, schema: FeatureSchema | None = None) -> ModelArtifact:
    """Load and verify an artifact; optional schema must match the fingerprint."""
    p = Path(path)
    if not p.exists():
        raise MissingInputError(f"artifact not found: {p}")
    doc = json.loads(p.read_text(encoding="utf-8"))
    version = doc.get("format_version")
    if version != ARTIFACT_FORMAT_VERSION:
        raise VersionMismatchError(
            f"artifact format_version {version!r} unsupported (expected {ARTIFACT_FORMAT_VERSION})"
        )
    embedded = FeatureSchema.from_dict(doc["schema"])
    recorded = doc.get("schema_fingerprint")
    if embedded.fingerprint() != recorded:
        raise FingerprintMismatchError(
            f"artifact fingerprint {recorded!r} does not match its embedded schema"
        )
    if schema is not None and schema.fingerprint() != recorded:
        raise FingerprintMismatchError(
            "artifact was trained against a different schema than the one provided"
        )
    background = np.asarray(doc.get("background", []), dtype=np.float64)
    if background.size == 0:
        background = None
    return ModelArtifact(
        model=_model_from_payload(doc["family"], doc["payload"], embedded),
        family=doc["family"],
        schema=embedded,
        train_config=TrainConfig.from_dict(doc["train_config"]),
        metrics=doc.get("metrics"),
        background=background,
        imputation_defaults=doc.get("imputation_defaults"),
        format_version=version,
    )
