import { ChildProcess, spawn } from 'node:child_process';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { PlannerClient } from '../src/api.js';
import { runWhatIf } from '../src/panel.js';
import { POST_NIGHT_REST, renderByNurse } from '../src/schedule.js';
import { sliderRanges } from '../src/whatIf.js';
import type { NurseDayCell } from '../src/types.js';

// Two-nurse reference ward: one DAY and one NIGHT nurse needed every day,
// but night work forces a rest the following day, so the baseline roster
// has one unfilled slot that a single hire removes.
const WARD = {
  nurses: [
    { id: 'n1', name: 'Avery', h_min: 8.0, h_std: 16.0, h_max: 16.0 },
    { id: 'n2', name: 'Blake', h_min: 8.0, h_std: 16.0, h_max: 16.0 },
  ],
  shifts: [
    { id: 'DAY', name: 'Day', duration_hours: 8.0, capacity_per_nurse: 4, min_staff: 0, is_night: false },
    { id: 'NIGHT', name: 'Night', duration_hours: 8.0, capacity_per_nurse: 4, min_staff: 0, is_night: true },
  ],
  demand: [
    { day_label: 'd1', patients: 4 },
    { day_label: 'd2', patients: 4 },
  ],
  config: {
    weeks: 1,
    days_per_week: 2,
    p1: 1.0,
    big_m: 1000000.0,
    hire_cost: 10.0,
    weights: [
      { shift: 'DAY', day: 'd1', weight: 1.0 },
      { shift: 'DAY', day: 'd2', weight: 1.0 },
      { shift: 'NIGHT', day: 'd1', weight: 2.0 },
      { shift: 'NIGHT', day: 'd2', weight: 2.0 },
    ],
  },
};

const PORT = 8700 + Math.floor(Math.random() * 300);
const BASE = `http://127.0.0.1:${PORT}`;

let service: ChildProcess;
let client: PlannerClient;
let sessionId: string;

beforeAll(async () => {
  service = spawn(
    'python3',
    ['-m', 'rosterly.service', '--port', String(PORT), '--time-limit', '30'],
    { stdio: 'ignore', env: { ...process.env, ROSTERLY_BACKEND: 'numpy' } }
  );
  const deadline = Date.now() + 60_000;
  for (;;) {
    try {
      client = new PlannerClient(BASE);
      sessionId = (await client.createSession(WARD)).id;
      return;
    } catch {
      if (Date.now() > deadline) {
        throw new Error('planner service did not come up');
      }
      await new Promise((resolve) => setTimeout(resolve, 250));
    }
  }
}, 70_000);

afterAll(() => {
  service?.kill();
});

describe('what-if panel against a live service', () => {
  it('recommends 1 additional hire at the baseline hire cost', async () => {
    const panel = await runWhatIf(client, {
      sessionId,
      p1: WARD.config.p1,
      hireCost: WARD.config.hire_cost,
      running: false,
    });
    expect(panel.ok).toBe(true);
    if (panel.ok) {
      expect(panel.banner).toBe('1 additional hire recommended');
      expect(panel.objective).toBeCloseTo(2.0, 6);
    }
  }, 60_000);

  it('recommends 0 hires at the slider maximum', async () => {
    const ranges = sliderRanges(
      WARD.config.p1,
      WARD.config.hire_cost,
      WARD.config.big_m
    );
    const panel = await runWhatIf(client, {
      sessionId,
      p1: WARD.config.p1,
      hireCost: ranges.hireCost.max,
      running: false,
    });
    expect(panel.ok).toBe(true);
    if (panel.ok) {
      expect(panel.banner).toBe('0 hires');
    }
  }, 60_000);

  it('renders POST-NIGHT-REST on the day after any rendered night shift', async () => {
    const panel = await runWhatIf(client, {
      sessionId,
      p1: WARD.config.p1,
      hireCost: WARD.config.hire_cost,
      running: false,
    });
    expect(panel.ok).toBe(true);
    if (!panel.ok) {
      return;
    }
    let nightsSeen = 0;
    for (const [nurseId, rows] of Object.entries(panel.roster.by_nurse)) {
      const html = renderByNurse(nurseId, rows);
      rows.forEach((cell: NurseDayCell, i: number) => {
        if (cell.entry === 'NIGHT' && i + 1 < rows.length) {
          nightsSeen += 1;
          expect(rows[i + 1].entry).toBe(POST_NIGHT_REST);
          expect(html).toContain(POST_NIGHT_REST);
        }
      });
    }
    expect(nightsSeen).toBeGreaterThan(0);
  }, 60_000);

  it('serves repeated identical what-ifs from cache without a new job', async () => {
    const state = {
      sessionId,
      p1: WARD.config.p1,
      hireCost: WARD.config.hire_cost,
      running: false,
    };
    const first = await runWhatIf(client, state);
    const second = await runWhatIf(client, state);
    expect(first.ok && second.ok).toBe(true);
    if (first.ok && second.ok) {
      expect(second.cached).toBe(true);
      expect(second.jobId).toBe(first.jobId);
      expect(second.banner).toBe(first.banner);
      expect(second.kpis).toEqual(first.kpis);
    }
  }, 60_000);

  it('rejects an invalid instance with located errors', async () => {
    const broken = structuredClone(WARD) as typeof WARD;
    broken.nurses[0].h_min = 99.0;
    const error = await client.createSession(broken).catch((e) => e);
    expect(error.status).toBe(422);
    expect(error.code).toBe('invalid-instance');
    expect(error.locations.length).toBeGreaterThan(0);
  });
});
