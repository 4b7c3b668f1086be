// Patient form state driven entirely by the served schema: one control per
// feature, numeric fields validated against the declared range, categorical
// dropdowns restricted to declared codes. Submit is allowed only when every
// field is valid.

import type { FeatureSchema, FeatureSpec, PatientRecord } from './types.js';

export interface FieldState {
  spec: FeatureSpec;
  raw: string; // what the user typed / selected (code as string for categoricals)
  dirty: boolean;
  error: string | null;
}

export interface FormState {
  fields: FieldState[];
  byName: Map<string, FieldState>;
}

export function buildForm(schema: FeatureSchema): FormState {
  const fields = schema.features.map((spec) => initialField(spec));
  return { fields, byName: new Map(fields.map((f) => [f.spec.name, f])) };
}

function initialField(spec: FeatureSpec): FieldState {
  if (spec.kind === 'categorical') {
    const first = spec.categories?.[0];
    return { spec, raw: first ? String(first[0]) : '', dirty: false, error: null };
  }
  return { spec, raw: '', dirty: false, error: 'required' };
}

export function setField(form: FormState, name: string, raw: string): FieldState {
  const field = form.byName.get(name);
  if (!field) {
    throw new Error(`unknown form field ${name}`);
  }
  field.raw = raw;
  field.dirty = true;
  field.error = validateField(field.spec, raw);
  return field;
}

export function validateField(spec: FeatureSpec, raw: string): string | null {
  const text = raw.trim();
  if (text === '') {
    return 'required';
  }
  const value = Number(text);
  if (!Number.isFinite(value)) {
    return 'not a number';
  }
  if (spec.kind === 'categorical') {
    const codes = (spec.categories ?? []).map(([code]) => code);
    if (!Number.isInteger(value) || !codes.includes(value)) {
      return `must be one of codes ${codes.join(', ')}`;
    }
    return null;
  }
  if (spec.numeric_range) {
    const [lo, hi] = spec.numeric_range;
    if (value < lo || value > hi) {
      return `outside ${lo}..${hi}`;
    }
  }
  return null;
}

export function formValid(form: FormState): boolean {
  return form.fields.every((f) => f.error === null);
}

export function toRecord(form: FormState): PatientRecord {
  if (!formValid(form)) {
    throw new Error('form has invalid fields');
  }
  const features: Record<string, number> = {};
  for (const field of form.fields) {
    features[field.spec.name] = Number(field.raw);
  }
  return { features };
}

export function categoryOptions(spec: FeatureSpec): { code: number; label: string }[] {
  return (spec.categories ?? []).map(([code, label]) => ({ code, label }));
}
