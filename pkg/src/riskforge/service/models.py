"""Pydantic request/response bodies for the /v1 scoring service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class PatientRecord(BaseModel):
    """Feature name -> value; omitted features fall back to training defaults."""

    features: dict[str, float | int | None] = Field(default_factory=dict)


class FeatureOverride(BaseModel):
    feature: str
    value: float | int


class WhatIfRequest(BaseModel):
    record: PatientRecord
    overrides: list[FeatureOverride] = Field(default_factory=list)


class ExplanationItem(BaseModel):
    feature_id: int
    feature: str
    feature_value: float
    phi: float


class ExplanationPayload(BaseModel):
    base_value: float
    prediction: float
    output_scale: str
    method: str
    records: list[ExplanationItem]


class ModelMetadata(BaseModel):
    family: str
    format_version: int
    schema_fingerprint: str
    toolkit_version: str
    background_size: int
    metrics: dict | None = None


class ModelInfo(ModelMetadata):
    feature_schema: dict


class RiskResponse(BaseModel):
    score: float
    label: int
    threshold: float
    output_scale_note: str | None = None
    imputed_features: list[str] = Field(default_factory=list)
    model: ModelMetadata
    explanation: ExplanationPayload | None = None


class FeatureDelta(BaseModel):
    feature: str
    delta_phi: float


class WhatIfResponse(BaseModel):
    base: RiskResponse
    modified: RiskResponse
    deltas: list[FeatureDelta]
    score_delta: float


class HealthResponse(BaseModel):
    status: str
    model_loaded: bool
