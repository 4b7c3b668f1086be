// Wire types mirroring the service's /v1 response bodies.
// The console renders these fields verbatim: every number on screen is
// traceable to one of them.

export interface CategoryEntry {
  code: number;
  label: string;
}

export interface FeatureSpec {
  name: string;
  kind: 'numeric' | 'categorical';
  categories: [number, string][] | null;
  numeric_range: [number, number] | null;
}

export interface FeatureSchema {
  format_version: number;
  label_name: string;
  text_columns: string[];
  features: FeatureSpec[];
}

export interface ModelInfo {
  family: string;
  format_version: number;
  schema_fingerprint: string;
  toolkit_version: string;
  background_size: number;
  metrics: Record<string, [number, number]> | null;
  feature_schema: FeatureSchema;
}

export interface ExplanationItem {
  feature_id: number;
  feature: string;
  feature_value: number;
  phi: number;
}

export interface ExplanationPayload {
  base_value: number;
  prediction: number;
  output_scale: 'probability' | 'margin';
  method: string;
  records: ExplanationItem[];
}

export interface RiskResponse {
  score: number;
  label: number;
  threshold: number;
  output_scale_note: string | null;
  imputed_features: string[];
  model: Omit<ModelInfo, 'feature_schema'>;
  explanation: ExplanationPayload | null;
}

export interface FeatureDelta {
  feature: string;
  delta_phi: number;
}

export interface WhatIfResponse {
  base: RiskResponse;
  modified: RiskResponse;
  deltas: FeatureDelta[];
  score_delta: number;
}

export interface PatientRecord {
  features: Record<string, number>;
}

export interface FeatureOverride {
  feature: string;
  value: number;
}
