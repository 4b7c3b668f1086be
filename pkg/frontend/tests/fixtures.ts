import type { FeatureSchema, RiskResponse } from '../src/types.js';

export function tinySchema(): FeatureSchema {
  return {
    format_version: 1,
    label_name: 'suicide',
    text_columns: [],
    features: [
      { name: 'age', kind: 'numeric', categories: null, numeric_range: [0, 120] },
      {
        name: 'anger',
        kind: 'categorical',
        categories: [
          [0, 'No'],
          [1, 'Yes'],
        ],
        numeric_range: null,
      },
      {
        name: 'education_level',
        kind: 'categorical',
        categories: [
          [0, 'Low'],
          [1, 'Mid'],
          [2, 'High'],
        ],
        numeric_range: null,
      },
    ],
  };
}

export function explainResponse(): RiskResponse {
  return {
    score: 0.82,
    label: 1,
    threshold: 0.5,
    output_scale_note: null,
    imputed_features: [],
    model: {
      family: 'gradient_boosted',
      format_version: 1,
      schema_fingerprint: 'abc',
      toolkit_version: '0.1.0',
      background_size: 16,
      metrics: null,
    },
    explanation: {
      base_value: 0.3,
      prediction: 0.82,
      output_scale: 'probability',
      method: 'tree_exact',
      records: [
        { feature_id: 0, feature: 'age', feature_value: 56, phi: 0.12 },
        { feature_id: 1, feature: 'anger', feature_value: 1, phi: 0.45 },
        { feature_id: 2, feature: 'education_level', feature_value: 0, phi: -0.05 },
      ],
    },
  };
}
