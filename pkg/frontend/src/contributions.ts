// Contribution view model: signed bars sized from the service's phi values,
// a base-value marker and an additivity badge. No attribution math happens
// here; the badge merely re-adds numbers the service returned and compares.

import type { ExplanationPayload, RiskResponse } from './types.js';

export interface ContributionBar {
  feature: string;
  value: number;
  phi: number;
  direction: 'positive' | 'negative' | 'zero';
  widthPct: number; // |phi| relative to the largest |phi|, in percent
}

export interface ContributionView {
  bars: ContributionBar[]; // ordered by |phi| descending, ties by feature id
  baseValue: number;
  prediction: number;
  score: number;
  outputScale: 'probability' | 'margin';
  scaleNote: string | null;
  additivityGap: number;
  additivityOk: boolean;
  imputedFeatures: string[];
}

export const ADDITIVITY_TOLERANCE = 1e-6;

export function buildContributionView(response: RiskResponse): ContributionView {
  const explanation = response.explanation;
  if (!explanation) {
    throw new Error('response carries no explanation payload');
  }
  const bars = buildBars(explanation);
  const phiSum = explanation.records.reduce((acc, r) => acc + r.phi, 0);
  const gap = Math.abs(explanation.base_value + phiSum - explanation.prediction);
  return {
    bars,
    baseValue: explanation.base_value,
    prediction: explanation.prediction,
    score: response.score,
    outputScale: explanation.output_scale,
    scaleNote: response.output_scale_note,
    additivityGap: gap,
    additivityOk: gap <= ADDITIVITY_TOLERANCE,
    imputedFeatures: response.imputed_features,
  };
}

function buildBars(explanation: ExplanationPayload): ContributionBar[] {
  const maxAbs = Math.max(...explanation.records.map((r) => Math.abs(r.phi)), 0);
  const ordered = [...explanation.records].sort((a, b) => {
    const diff = Math.abs(b.phi) - Math.abs(a.phi);
    return diff !== 0 ? diff : a.feature_id - b.feature_id;
  });
  return ordered.map((r) => ({
    feature: r.feature,
    value: r.feature_value,
    phi: r.phi,
    direction: r.phi > 0 ? 'positive' : r.phi < 0 ? 'negative' : 'zero',
    widthPct: maxAbs === 0 ? 0 : (Math.abs(r.phi) / maxAbs) * 100,
  }));
}
