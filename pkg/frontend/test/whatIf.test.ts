import { describe, expect, it } from 'vitest';

import {
  clampToRange,
  deltaArrow,
  deltaDirection,
  hiresBanner,
  kpiRows,
  sliderRanges,
} from '../src/whatIf.js';
import { sampleDelta, sampleKpis } from './helpers.js';

describe('slider ranges', () => {
  it('spans p1 from 0 to ten times the baseline', () => {
    const ranges = sliderRanges(1, 10, 1e6);
    expect(ranges.p1.min).toBe(0);
    expect(ranges.p1.max).toBe(10);
  });

  it('hire-cost maximum reaches the never-hire regime', () => {
    const ranges = sliderRanges(1, 10, 1e6);
    expect(ranges.hireCost.min).toBe(0);
    // 100x baseline would stop at 1000, below the understaffing weight;
    // the widened maximum clears it.
    expect(ranges.hireCost.max).toBeGreaterThan(1e6);
  });

  it('keeps 100x baseline when that already dominates', () => {
    const ranges = sliderRanges(1, 1e7, 1e6);
    expect(ranges.hireCost.max).toBe(1e9);
  });

  it('clamps slider values into range', () => {
    const range = { min: 0, max: 10, step: 0.1 };
    expect(clampToRange(-5, range)).toBe(0);
    expect(clampToRange(25, range)).toBe(10);
    expect(clampToRange(7, range)).toBe(7);
    expect(clampToRange(Number.NaN, range)).toBe(0);
  });
});

describe('hires banner', () => {
  it('renders the zero-hire case', () => {
    expect(hiresBanner(0)).toBe('0 hires');
  });

  it('renders the single-hire recommendation', () => {
    expect(hiresBanner(1)).toBe('1 additional hire recommended');
  });

  it('pluralizes larger counts', () => {
    expect(hiresBanner(3)).toBe('3 additional hires recommended');
  });
});

describe('delta arrows', () => {
  it('matches the sign of the delta', () => {
    expect(deltaDirection(2.5)).toBe('up');
    expect(deltaDirection(-0.1)).toBe('down');
    expect(deltaDirection(0)).toBe('flat');
    expect(deltaArrow(1)).toBe('▲');
    expect(deltaArrow(-1)).toBe('▼');
  });
});

describe('kpi rows', () => {
  it('takes values verbatim from the report and deltas from the delta', () => {
    const rows = kpiRows(sampleKpis(), sampleDelta());
    const byLabel = Object.fromEntries(rows.map((r) => [r.label, r]));
    expect(byLabel['Nurses'].value).toBe(3);
    expect(byLabel['Nurses'].delta).toBe(1);
    expect(byLabel['Nurses'].arrow).toBe('▲');
    expect(byLabel['Unfilled slots'].delta).toBe(-1);
    expect(byLabel['Unfilled slots'].arrow).toBe('▼');
    expect(byLabel['Objective'].value).toBe(2);
    expect(rows).toHaveLength(8);
  });
});
