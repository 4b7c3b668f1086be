// What-if panel state: selected overrides plus latest-wins request keying so
// a slow earlier response can never clobber the newest edit's answer.

import type { FeatureOverride, WhatIfResponse } from './types.js';

export interface WhatIfState {
  overrides: Map<string, number>;
  latestRequestId: number;
  result: WhatIfResponse | null;
  error: string | null;
}

export function newWhatIfState(): WhatIfState {
  return { overrides: new Map(), latestRequestId: 0, result: null, error: null };
}

export function setOverride(state: WhatIfState, feature: string, value: number): void {
  state.overrides.set(feature, value);
}

export function clearOverride(state: WhatIfState, feature: string): void {
  state.overrides.delete(feature);
}

export function overridesList(state: WhatIfState): FeatureOverride[] {
  return [...state.overrides.entries()].map(([feature, value]) => ({ feature, value }));
}

export function nextRequestId(state: WhatIfState): number {
  state.latestRequestId += 1;
  return state.latestRequestId;
}

/** Apply a response only if it answers the newest request (latest wins). */
export function applyResult(state: WhatIfState, requestId: number, result: WhatIfResponse): boolean {
  if (requestId !== state.latestRequestId) {
    return false;
  }
  state.result = result;
  state.error = null;
  return true;
}

export function applyError(state: WhatIfState, requestId: number, message: string): boolean {
  if (requestId !== state.latestRequestId) {
    return false;
  }
  state.error = message;
  return true;
}

export interface DeltaChip {
  feature: string;
  deltaPhi: number;
}

/** Non-zero per-feature phi deltas, largest magnitude first. */
export function deltaChips(result: WhatIfResponse, epsilon = 1e-12): DeltaChip[] {
  return result.deltas
    .filter((d) => Math.abs(d.delta_phi) > epsilon)
    .sort((a, b) => Math.abs(b.delta_phi) - Math.abs(a.delta_phi))
    .map((d) => ({ feature: d.feature, deltaPhi: d.delta_phi }));
}
