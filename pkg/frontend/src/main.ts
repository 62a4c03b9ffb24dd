import { PlannerClient } from './api.js';
import { PanelState, renderBanner, runWhatIf } from './panel.js';
import { renderScheduleView, viewOptions } from './schedule.js';
import { clampToRange, sliderRanges, WhatIfControls } from './whatIf.js';
import type { RosterViews } from './types.js';

interface Elements {
  instanceInput: HTMLTextAreaElement;
  loadButton: HTMLButtonElement;
  p1Slider: HTMLInputElement;
  hireCostSlider: HTMLInputElement;
  runButton: HTMLButtonElement;
  banner: HTMLElement;
  kpiTable: HTMLElement;
  viewSelect: HTMLSelectElement;
  grid: HTMLElement;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function renderKpis(panel: PanelState, target: HTMLElement): void {
  if (!panel.ok) {
    target.innerHTML = '';
    return;
  }
  const rows = panel.kpis
    .map(
      (row) =>
        `<tr><td>${row.label}</td><td>${row.value}</td>` +
        `<td class="delta-${Math.sign(row.delta)}">${row.arrow} ${row.delta}</td></tr>`
    )
    .join('');
  target.innerHTML =
    '<table class="kpis"><thead><tr><th>KPI</th><th>Value</th><th>Δ vs baseline</th></tr></thead>' +
    `<tbody>${rows}</tbody></table>`;
}

function renderViewSelect(views: RosterViews, select: HTMLSelectElement): void {
  const { nurses, days } = viewOptions(views);
  select.innerHTML = [
    ...nurses.map((n) => `<option value="nurse:${n}">Nurse ${n}</option>`),
    ...days.map((d) => `<option value="day:${d}">Day ${d}</option>`),
  ].join('');
}

function renderGrid(views: RosterViews, selected: string, target: HTMLElement): void {
  const [mode, key] = selected.split(':', 2) as ['nurse' | 'day', string];
  target.innerHTML = renderScheduleView(
    mode === 'nurse'
      ? { mode: 'by-nurse', key, rows: views.by_nurse[key] ?? [] }
      : { mode: 'by-day', key, rows: views.by_day[key] ?? [] }
  );
}

export function bootstrap(baseUrl: string): void {
  const client = new PlannerClient(baseUrl);
  const ui: Elements = {
    instanceInput: el('instance-json'),
    loadButton: el('load-session'),
    p1Slider: el('p1'),
    hireCostSlider: el('hire-cost'),
    runButton: el('run-whatif'),
    banner: el('banner'),
    kpiTable: el('kpi-table'),
    viewSelect: el('view-select'),
    grid: el('grid'),
  };
  let controls: WhatIfControls | null = null;
  let views: RosterViews | null = null;

  const setBusy = (busy: boolean) => {
    ui.p1Slider.disabled = busy;
    ui.hireCostSlider.disabled = busy;
    ui.runButton.disabled = busy || controls === null;
  };

  ui.loadButton.addEventListener('click', async () => {
    try {
      const payload = JSON.parse(ui.instanceInput.value);
      const session = await client.createSession(payload);
      const config = payload.config ?? {};
      const ranges = sliderRanges(
        Number(config.p1 ?? 1),
        Number(config.hire_cost ?? 1),
        Number(config.big_m ?? 1e6)
      );
      controls = {
        sessionId: session.id,
        p1: Number(config.p1 ?? 1),
        hireCost: Number(config.hire_cost ?? 1),
        running: false,
      };
      for (const [slider, range] of [
        [ui.p1Slider, ranges.p1],
        [ui.hireCostSlider, ranges.hireCost],
      ] as const) {
        slider.min = String(range.min);
        slider.max = String(range.max);
        slider.step = String(range.step);
      }
      ui.p1Slider.value = String(controls.p1);
      ui.hireCostSlider.value = String(controls.hireCost);
      setBusy(false);
      ui.banner.innerHTML = `<div class="banner">session ${session.id} ready</div>`;
    } catch (error) {
      ui.banner.innerHTML = `<div class="banner banner-error">${
        error instanceof Error ? error.message : String(error)
      }</div>`;
    }
  });

  ui.runButton.addEventListener('click', async () => {
    if (controls === null) {
      return;
    }
    const ranges = sliderRanges(controls.p1, controls.hireCost, 1e6);
    controls.p1 = clampToRange(Number(ui.p1Slider.value), {
      ...ranges.p1,
      max: Number(ui.p1Slider.max),
    });
    controls.hireCost = clampToRange(Number(ui.hireCostSlider.value), {
      ...ranges.hireCost,
      max: Number(ui.hireCostSlider.max),
    });
    setBusy(true);
    const panel = await runWhatIf(client, controls);
    setBusy(false);
    ui.banner.innerHTML = renderBanner(panel);
    renderKpis(panel, ui.kpiTable);
    if (panel.ok) {
      views = panel.roster;
      renderViewSelect(views, ui.viewSelect);
      renderGrid(views, ui.viewSelect.value, ui.grid);
    }
  });

  ui.viewSelect.addEventListener('change', () => {
    if (views !== null) {
      renderGrid(views, ui.viewSelect.value, ui.grid);
    }
  });
}

if (typeof document !== 'undefined' && document.getElementById('run-whatif')) {
  bootstrap(window.location.origin);
}
