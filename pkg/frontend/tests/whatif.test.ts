import { describe, expect, it } from 'vitest';

import {
  applyError,
  applyResult,
  deltaChips,
  newWhatIfState,
  nextRequestId,
  overridesList,
  setOverride,
} from '../src/whatif.js';
import type { WhatIfResponse } from '../src/types.js';
import { explainResponse } from './fixtures.js';

function whatIfResponse(scoreDelta = 0.1): WhatIfResponse {
  return {
    base: explainResponse(),
    modified: explainResponse(),
    deltas: [
      { feature: 'age', delta_phi: 0 },
      { feature: 'anger', delta_phi: -0.3 },
      { feature: 'education_level', delta_phi: 0.02 },
    ],
    score_delta: scoreDelta,
  };
}

describe('what-if state', () => {
  it('collects overrides as (feature, value) pairs', () => {
    const state = newWhatIfState();
    setOverride(state, 'anger', 0);
    setOverride(state, 'age', 60);
    setOverride(state, 'anger', 1); // last write wins per feature
    expect(overridesList(state)).toEqual([
      { feature: 'anger', value: 1 },
      { feature: 'age', value: 60 },
    ]);
  });

  it('latest request wins: stale responses are dropped', () => {
    const state = newWhatIfState();
    const first = nextRequestId(state);
    const second = nextRequestId(state);
    expect(applyResult(state, first, whatIfResponse(0.5))).toBe(false);
    expect(state.result).toBeNull();
    expect(applyResult(state, second, whatIfResponse(0.2))).toBe(true);
    expect(state.result!.score_delta).toBe(0.2);
  });

  it('stale errors are dropped too', () => {
    const state = newWhatIfState();
    const first = nextRequestId(state);
    nextRequestId(state);
    expect(applyError(state, first, 'boom')).toBe(false);
    expect(state.error).toBeNull();
  });

  it('delta chips keep only non-zero deltas, largest first', () => {
    const chips = deltaChips(whatIfResponse());
    expect(chips).toEqual([
      { feature: 'anger', deltaPhi: -0.3 },
      { feature: 'education_level', deltaPhi: 0.02 },
    ]);
  });
});
