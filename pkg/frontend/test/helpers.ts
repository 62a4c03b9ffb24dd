import type { FetchLike } from '../src/api.js';
import type { JobResult, KpiDelta, KpiReport, RosterViews } from '../src/types.js';

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

/** Fetch stub that pops canned responses in order and records each call. */
export function scriptedFetch(
  responses: Array<{ status: number; body: unknown }>
): { fetchFn: FetchLike; calls: RecordedCall[] } {
  const queue = [...responses];
  const calls: RecordedCall[] = [];
  const fetchFn: FetchLike = async (url, init) => {
    calls.push({
      url,
      method: init?.method ?? 'GET',
      body: typeof init?.body === 'string' ? JSON.parse(init.body) : undefined,
    });
    const next = queue.shift();
    if (next === undefined) {
      throw new Error(`unexpected fetch: ${url}`);
    }
    return jsonResponse(next.status, next.body);
  };
  return { fetchFn, calls };
}

export function sampleKpis(overrides: Partial<KpiReport> = {}): KpiReport {
  return {
    nurse_count: 3,
    min_workload: 2,
    max_workload: 2,
    min_weekly_hours: 8,
    max_weekly_hours: 16,
    total_overtime_hours: 0,
    per_nurse_overtime: {},
    total_slack_units: 0,
    objective: 2,
    ...overrides,
  };
}

export function sampleDelta(overrides: Partial<KpiDelta> = {}): KpiDelta {
  return {
    nurse_count: 1,
    min_workload: 0,
    max_workload: 0,
    min_weekly_hours: 0,
    max_weekly_hours: 0,
    total_overtime_hours: 0,
    total_slack_units: -1,
    objective: -1_000_000,
    ...overrides,
  };
}

export function sampleRoster(): RosterViews {
  return {
    by_nurse: {
      n1: [
        { day: 'd1', entry: 'NIGHT', hours: 8 },
        { day: 'd2', entry: 'POST-NIGHT-REST', hours: 0 },
      ],
      n2: [
        { day: 'd1', entry: 'DAY', hours: 8 },
        { day: 'd2', entry: 'DAY', hours: 8 },
      ],
    },
    by_day: {
      d1: [
        { shift: 'DAY', nurses: ['n2'], slack: 0 },
        { shift: 'NIGHT', nurses: ['n1'], slack: 0 },
      ],
      d2: [
        { shift: 'DAY', nurses: ['n2'], slack: 0 },
        { shift: 'NIGHT', nurses: [], slack: 1 },
      ],
    },
  };
}

export function sampleResult(overrides: Partial<JobResult> = {}): JobResult {
  return {
    status: 'done',
    kind: 'staff-plan',
    params: {},
    objective: 2,
    kpis: sampleKpis(),
    kpi_delta: sampleDelta(),
    understaffing: { entries: [], total_slack: 0 },
    roster: sampleRoster(),
    hires_accepted: 1,
    stop_reason: 'improvement-below-c',
    ...overrides,
  };
}
