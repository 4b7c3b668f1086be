// DOM glue: wires the schema-driven form, the contribution view and the
// what-if panel to the service client. All state logic lives in the pure
// modules; this file only renders and forwards events.

import { ApiClient, ServiceError } from './api.js';
import { buildContributionView, ContributionView } from './contributions.js';
import { buildForm, categoryOptions, formValid, FormState, setField, toRecord } from './form.js';
import type { ModelInfo, RiskResponse, WhatIfResponse } from './types.js';
import {
  applyError,
  applyResult,
  deltaChips,
  newWhatIfState,
  nextRequestId,
  overridesList,
  WhatIfState,
} from './whatif.js';

const client = new ApiClient();
let form: FormState;
let info: ModelInfo;
const whatIf: WhatIfState = newWhatIfState();
let lastBase: RiskResponse | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function fmt(x: number, digits = 4): string {
  return x.toFixed(digits);
}

async function boot(): Promise<void> {
  try {
    info = await client.modelInfo();
  } catch (err) {
    el('status').textContent = `service unavailable: ${String(err)}`;
    return;
  }
  el('status').textContent =
    `model: ${info.family} · background ${info.background_size} rows · fingerprint ${info.schema_fingerprint.slice(0, 12)}…`;
  form = buildForm(info.feature_schema);
  renderForm();
  renderWhatIfControls();
  el<HTMLButtonElement>('submit').addEventListener('click', () => void submit());
}

function renderForm(): void {
  const host = el('form-fields');
  host.innerHTML = '';
  for (const field of form.fields) {
    const row = document.createElement('div');
    row.className = 'field';
    const label = document.createElement('label');
    label.textContent = field.spec.name.replaceAll('_', ' ');
    label.htmlFor = `f-${field.spec.name}`;
    row.appendChild(label);

    let control: HTMLInputElement | HTMLSelectElement;
    if (field.spec.kind === 'categorical') {
      const select = document.createElement('select');
      for (const option of categoryOptions(field.spec)) {
        const opt = document.createElement('option');
        opt.value = String(option.code);
        opt.textContent = `${option.code} — ${option.label}`;
        select.appendChild(opt);
      }
      select.value = field.raw;
      control = select;
    } else {
      const input = document.createElement('input');
      input.type = 'text';
      input.placeholder = 'numeric';
      input.value = field.raw;
      control = input;
    }
    control.id = `f-${field.spec.name}`;
    control.addEventListener('input', () => {
      const state = setField(form, field.spec.name, control.value);
      errorSpan.textContent = state.error ?? '';
      el<HTMLButtonElement>('submit').disabled = !formValid(form);
    });
    control.addEventListener('change', () => {
      const state = setField(form, field.spec.name, control.value);
      errorSpan.textContent = state.error ?? '';
      el<HTMLButtonElement>('submit').disabled = !formValid(form);
    });
    row.appendChild(control);

    const errorSpan = document.createElement('span');
    errorSpan.className = 'error';
    errorSpan.textContent = field.dirty ? (field.error ?? '') : '';
    row.appendChild(errorSpan);
    host.appendChild(row);
  }
  el<HTMLButtonElement>('submit').disabled = !formValid(form);
}

async function submit(): Promise<void> {
  const record = toRecord(form);
  el('status').textContent = 'scoring…';
  try {
    lastBase = await client.explain(record);
  } catch (err) {
    el('status').textContent = err instanceof ServiceError ? err.detail : String(err);
    return;
  }
  el('status').textContent = '';
  renderContribution(el('base-view'), buildContributionView(lastBase));
  await refreshWhatIf();
}

function renderContribution(host: HTMLElement, view: ContributionView): void {
  host.innerHTML = '';
  const head = document.createElement('div');
  head.className = 'readout';
  const risk = document.createElement('strong');
  risk.textContent = `risk ${fmt(view.score)}`;
  head.appendChild(risk);
  head.appendChild(
    document.createTextNode(
      ` · base ${fmt(view.baseValue)} → prediction ${fmt(view.prediction)} [${view.outputScale}]`,
    ),
  );
  const badge = document.createElement('span');
  badge.className = view.additivityOk ? 'badge ok' : 'badge bad';
  badge.title = `|base + Σφ − prediction| = ${view.additivityGap.toExponential(2)}`;
  badge.textContent = view.additivityOk ? 'additive ✓' : 'additivity broken';
  head.appendChild(badge);
  host.appendChild(head);
  if (view.scaleNote) {
    const note = document.createElement('div');
    note.className = 'note';
    note.textContent = view.scaleNote;
    host.appendChild(note);
  }
  if (view.imputedFeatures.length) {
    const note = document.createElement('div');
    note.className = 'note';
    note.textContent = `imputed: ${view.imputedFeatures.join(', ')}`;
    host.appendChild(note);
  }
  for (const bar of view.bars) {
    const row = document.createElement('div');
    row.className = 'bar-row';
    const name = document.createElement('span');
    name.className = 'bar-label';
    name.textContent = `${bar.feature} = ${bar.value}`;
    row.appendChild(name);
    const track = document.createElement('div');
    track.className = 'bar-track';
    const fill = document.createElement('div');
    fill.className = `bar-fill ${bar.direction}`;
    fill.style.width = `${bar.widthPct.toFixed(1)}%`;
    track.appendChild(fill);
    row.appendChild(track);
    const phi = document.createElement('span');
    phi.className = `phi ${bar.direction}`;
    phi.textContent = (bar.phi >= 0 ? '+' : '') + fmt(bar.phi, 5);
    row.appendChild(phi);
    host.appendChild(row);
  }
}

function renderWhatIfControls(): void {
  const select = el<HTMLSelectElement>('whatif-feature');
  select.innerHTML = '';
  for (const spec of info.feature_schema.features) {
    const opt = document.createElement('option');
    opt.value = spec.name;
    opt.textContent = spec.name;
    select.appendChild(opt);
  }
  el<HTMLButtonElement>('whatif-apply').addEventListener('click', () => {
    const feature = select.value;
    const raw = el<HTMLInputElement>('whatif-value').value;
    const value = Number(raw);
    if (!Number.isFinite(value)) {
      el('whatif-error').textContent = 'override must be numeric';
      return;
    }
    whatIf.overrides.set(feature, value);
    void refreshWhatIf();
  });
  el<HTMLButtonElement>('whatif-clear').addEventListener('click', () => {
    whatIf.overrides.clear();
    void refreshWhatIf();
  });
}

async function refreshWhatIf(): Promise<void> {
  if (!lastBase) return;
  const record = toRecord(form);
  const requestId = nextRequestId(whatIf);
  let response: WhatIfResponse;
  try {
    response = await client.whatIf(record, overridesList(whatIf));
  } catch (err) {
    const message = err instanceof ServiceError ? err.detail : String(err);
    if (applyError(whatIf, requestId, message)) {
      el('whatif-error').textContent = message;
    }
    return;
  }
  if (!applyResult(whatIf, requestId, response)) {
    return; // a newer edit superseded this request
  }
  el('whatif-error').textContent = '';
  renderContribution(el('whatif-base'), buildContributionView(response.base));
  renderContribution(el('whatif-modified'), buildContributionView(response.modified));
  const chips = el('whatif-chips');
  chips.innerHTML = '';
  const header = document.createElement('span');
  header.textContent = `score Δ ${(response.score_delta >= 0 ? '+' : '') + fmt(response.score_delta)}`;
  header.className = 'chip total';
  chips.appendChild(header);
  for (const chip of deltaChips(response)) {
    const span = document.createElement('span');
    span.className = 'chip';
    span.textContent = `${chip.feature}: ${(chip.deltaPhi >= 0 ? '+' : '') + fmt(chip.deltaPhi, 5)}`;
    chips.appendChild(span);
  }
}

void boot();
