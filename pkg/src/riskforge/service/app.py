"""FastAPI scoring/explanation service over one pinned model artifact.

One artifact per process (hot swap = restart): a session's answers come from
one model. Handlers never mutate shared state; the model, background and
imputation defaults are read-only after startup. Scoring is the same code
path as the library's ``predict_score``, so service and batch answers agree
bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..explain import BackgroundSet, explain_row
from ..learners import ModelArtifact, load_artifact, predict_score
from ..schema import CATEGORICAL, FeatureSchema
from .models import (
    ExplanationItem,
    ExplanationPayload,
    FeatureDelta,
    HealthResponse,
    ModelInfo,
    ModelMetadata,
    PatientRecord,
    RiskResponse,
    WhatIfRequest,
    WhatIfResponse,
)

DEFAULT_THRESHOLD = 0.5


@dataclass
class ServiceState:
    artifact: ModelArtifact | None = None
    background: BackgroundSet | None = None
    threshold: float = DEFAULT_THRESHOLD

    @classmethod
    def from_files(
        cls,
        artifact_path: str,
        schema_path: str | None = None,
        background_size: int = 128,
        threshold: float = DEFAULT_THRESHOLD,
    ) -> "ServiceState":
        schema = FeatureSchema.load(schema_path) if schema_path else None
        artifact = load_artifact(artifact_path, schema=schema)
        if artifact.background is None:
            raise ValueError(
                "artifact carries no background sample; re-save it with one to serve explanations"
            )
        rows = artifact.background[:background_size]
        return cls(
            artifact=artifact,
            background=BackgroundSet.from_rows(rows, source="artifact"),
            threshold=threshold,
        )


def _parse_record(record: PatientRecord, state: ServiceState) -> tuple[np.ndarray, list[str]]:
    """Validate a record against the schema; impute omitted features."""
    schema = state.artifact.schema
    defaults = state.artifact.imputation_defaults or {}
    unknown = [name for name in record.features if name not in schema.feature_names]
    if unknown:
        raise HTTPException(status_code=400, detail=f"unknown feature {unknown[0]!r}")
    row = np.empty(len(schema))
    imputed: list[str] = []
    for j, spec in enumerate(schema.features):
        raw = record.features.get(spec.name)
        if raw is None:
            if spec.name not in defaults:
                raise HTTPException(
                    status_code=400,
                    detail=f"feature {spec.name!r} missing and no imputation default is available",
                )
            row[j] = defaults[spec.name]
            imputed.append(spec.name)
            continue
        value = float(raw)
        if spec.kind == CATEGORICAL:
            if value != int(value) or int(value) not in spec.codes:
                raise HTTPException(
                    status_code=400,
                    detail=f"feature {spec.name!r}: undeclared categorical code {raw!r}",
                )
        elif spec.numeric_range is not None:
            lo, hi = spec.numeric_range
            if not lo <= value <= hi:
                raise HTTPException(
                    status_code=400,
                    detail=f"feature {spec.name!r}: value {raw!r} outside declared range",
                )
        row[j] = value
    return row, imputed


def _metadata(state: ServiceState) -> ModelMetadata:
    artifact = state.artifact
    return ModelMetadata(
        family=artifact.family,
        format_version=artifact.format_version,
        schema_fingerprint=artifact.schema_fingerprint,
        toolkit_version=__version__,
        background_size=state.background.size,
        metrics=artifact.metrics,
    )


def _risk_response(state: ServiceState, row: np.ndarray, imputed: list[str], with_explanation: bool) -> RiskResponse:
    artifact = state.artifact
    score = float(predict_score(artifact.model, row))
    explanation = None
    note = None
    if with_explanation:
        exp = explain_row(artifact.model, row, state.background, feature_names=artifact.schema.feature_names)
        explanation = ExplanationPayload(
            base_value=exp.base_value,
            prediction=exp.prediction,
            output_scale=exp.output_scale,
            method=exp.method,
            records=[ExplanationItem(**r) for r in exp.to_records()],
        )
        if exp.output_scale == "margin":
            note = "contributions are additive on the margin (log-odds) scale; score is the probability readout"
    return RiskResponse(
        score=score,
        label=int(score >= state.threshold),
        threshold=state.threshold,
        output_scale_note=note,
        imputed_features=imputed,
        model=_metadata(state),
        explanation=explanation,
    )


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="riskforge scoring service", version=__version__)

    def require_model() -> None:
        if state.artifact is None or state.background is None:
            raise HTTPException(status_code=503, detail="model not loaded")

    @app.get("/v1/health", response_model=HealthResponse)
    def health():
        loaded = state.artifact is not None
        if not loaded:
            raise HTTPException(status_code=503, detail="model not loaded")
        return HealthResponse(status="ok", model_loaded=True)

    @app.get("/v1/model", response_model=ModelInfo)
    def model_info():
        require_model()
        meta = _metadata(state)
        return ModelInfo(**meta.model_dump(), feature_schema=state.artifact.schema.to_dict())

    @app.post("/v1/score", response_model=RiskResponse)
    def score(record: PatientRecord):
        require_model()
        row, imputed = _parse_record(record, state)
        return _risk_response(state, row, imputed, with_explanation=False)

    @app.post("/v1/explain", response_model=RiskResponse)
    def explain(record: PatientRecord):
        require_model()
        row, imputed = _parse_record(record, state)
        return _risk_response(state, row, imputed, with_explanation=True)

    @app.post("/v1/whatif", response_model=WhatIfResponse)
    def whatif(request: WhatIfRequest):
        require_model()
        row, imputed = _parse_record(request.record, state)
        schema = state.artifact.schema
        modified = row.copy()
        for override in request.overrides:
            if override.feature not in schema.feature_names:
                raise HTTPException(status_code=400, detail=f"unknown feature {override.feature!r}")
            j = schema.index_of(override.feature)
            spec = schema.features[j]
            value = float(override.value)
            if spec.kind == CATEGORICAL and (value != int(value) or int(value) not in spec.codes):
                raise HTTPException(
                    status_code=400,
                    detail=f"override {override.feature!r}: undeclared categorical code {override.value!r}",
                )
            modified[j] = value
        base_resp = _risk_response(state, row, imputed, with_explanation=True)
        mod_resp = _risk_response(state, modified, imputed, with_explanation=True)
        deltas = [
            FeatureDelta(feature=name, delta_phi=m.phi - b.phi)
            for name, b, m in zip(
                schema.feature_names, base_resp.explanation.records, mod_resp.explanation.records
            )
        ]
        return WhatIfResponse(
            base=base_resp,
            modified=mod_resp,
            deltas=deltas,
            score_delta=mod_resp.score - base_resp.score,
        )

    return app


def serve(
    artifact_path: str,
    schema_path: str | None = None,
    host: str = "127.0.0.1",
    port: int = 8321,
    background_size: int = 128,
) -> None:
    import uvicorn

    state = ServiceState.from_files(artifact_path, schema_path, background_size)
    uvicorn.run(create_app(state), host=host, port=port, log_level="warning")
