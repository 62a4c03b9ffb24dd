import type { KpiDelta, KpiReport } from './types.js';

/** Dashboard control state for the p1 / hire-cost sliders. */
export interface WhatIfControls {
  sessionId: string;
  p1: number;
  hireCost: number;
  running: boolean;
}

export interface SliderRange {
  min: number;
  max: number;
  step: number;
}

export interface SliderRanges {
  p1: SliderRange;
  hireCost: SliderRange;
}

/**
 * Slider ranges derived from the session's baseline penalties.
 *
 * p1 spans [0, 10x baseline]. The hire-cost slider spans at least
 * [0, 100x baseline] and is widened to 10x the understaffing weight so its
 * maximum always reaches the "never hire" regime (a hire is only accepted
 * when it beats its cost; the largest possible saving is bounded by the
 * understaffing penalty).
 */
export function sliderRanges(baselineP1: number, baselineHireCost: number, bigM: number): SliderRanges {
  const p1Max = 10 * baselineP1;
  const hireMax = Math.max(100 * baselineHireCost, 10 * bigM);
  return {
    p1: { min: 0, max: p1Max, step: p1Max / 100 },
    hireCost: { min: 0, max: hireMax, step: hireMax / 100 },
  };
}

export function clampToRange(value: number, range: SliderRange): number {
  if (Number.isNaN(value)) {
    return range.min;
  }
  return Math.min(range.max, Math.max(range.min, value));
}

/** Hires banner text; numbers come verbatim from the service. */
export function hiresBanner(hiresAccepted: number): string {
  if (hiresAccepted === 0) {
    return '0 hires';
  }
  if (hiresAccepted === 1) {
    return '1 additional hire recommended';
  }
  return `${hiresAccepted} additional hires recommended`;
}

export type DeltaDirection = 'up' | 'down' | 'flat';

/** Arrow sign equals the sign of the delta field; no other arithmetic. */
export function deltaDirection(delta: number): DeltaDirection {
  if (delta > 0) {
    return 'up';
  }
  if (delta < 0) {
    return 'down';
  }
  return 'flat';
}

export function deltaArrow(delta: number): string {
  const glyphs: Record<DeltaDirection, string> = { up: '▲', down: '▼', flat: '·' };
  return glyphs[deltaDirection(delta)];
}

export interface KpiRow {
  label: string;
  value: number;
  delta: number;
  arrow: string;
}

const KPI_FIELDS: Array<[keyof KpiDelta, string]> = [
  ['nurse_count', 'Nurses'],
  ['min_workload', 'Min workload'],
  ['max_workload', 'Max workload'],
  ['min_weekly_hours', 'Min weekly hours'],
  ['max_weekly_hours', 'Max weekly hours'],
  ['total_overtime_hours', 'Total overtime (h)'],
  ['total_slack_units', 'Unfilled slots'],
  ['objective', 'Objective'],
];

/** KPI table rows with delta-vs-baseline arrows. */
export function kpiRows(report: KpiReport, delta: KpiDelta): KpiRow[] {
  return KPI_FIELDS.map(([field, label]) => ({
    label,
    value: report[field] as number,
    delta: delta[field],
    arrow: deltaArrow(delta[field]),
  }));
}
