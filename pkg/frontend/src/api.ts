// Thin typed client for the /v1 endpoints. Base URL resolution order:
// explicit argument > window.RISKFORGE_URL (set by the hosting page) >
// same-origin.

import type { FeatureOverride, ModelInfo, PatientRecord, RiskResponse, WhatIfResponse } from './types.js';

declare global {
  interface Window {
    RISKFORGE_URL?: string;
  }
}

export class ServiceError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`service ${status}: ${detail}`);
  }
}

export class ApiClient {
  constructor(private baseUrl: string = defaultBaseUrl()) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      const detail = typeof payload?.detail === 'string' ? payload.detail : response.statusText;
      throw new ServiceError(response.status, detail);
    }
    return payload as T;
  }

  modelInfo(): Promise<ModelInfo> {
    return this.request<ModelInfo>('GET', '/v1/model');
  }

  score(record: PatientRecord): Promise<RiskResponse> {
    return this.request<RiskResponse>('POST', '/v1/score', record);
  }

  explain(record: PatientRecord): Promise<RiskResponse> {
    return this.request<RiskResponse>('POST', '/v1/explain', record);
  }

  whatIf(record: PatientRecord, overrides: FeatureOverride[]): Promise<WhatIfResponse> {
    return this.request<WhatIfResponse>('POST', '/v1/whatif', { record, overrides });
  }
}

export function defaultBaseUrl(): string {
  if (typeof window !== 'undefined' && window.RISKFORGE_URL) {
    return window.RISKFORGE_URL.replace(/\/$/, '');
  }
  return '';
}
