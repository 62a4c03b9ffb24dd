import { JobFailedError, PlannerClient } from './api.js';
import type { JobResult, RosterViews } from './types.js';
import { hiresBanner, kpiRows, WhatIfControls, KpiRow } from './whatIf.js';

/** Everything the result panel needs to render one what-if outcome. */
export interface ResultPanel {
  ok: true;
  jobId: string;
  /** True when the service replayed a previous identical run (no new job). */
  cached: boolean;
  banner: string;
  objective: number;
  stopReason?: string;
  kpis: KpiRow[];
  roster: RosterViews;
}

export interface ErrorPanel {
  ok: false;
  error: string;
}

export type PanelState = ResultPanel | ErrorPanel;

/**
 * Submit a staff-plan job with the current slider values, poll it to
 * completion, and distill the result for rendering. `controls.running` is
 * held true for the duration so the caller can disable the sliders; it is
 * always released, including on failure.
 */
export async function runWhatIf(
  client: PlannerClient,
  controls: WhatIfControls
): Promise<PanelState> {
  if (controls.running) {
    return { ok: false, error: 'a what-if run is already in progress' };
  }
  controls.running = true;
  try {
    const ticket = await client.submitJob(controls.sessionId, 'staff-plan', {
      p1: controls.p1,
      hire_cost: controls.hireCost,
    });
    const result = await client.pollJob(ticket.job_id);
    return buildPanel(ticket.job_id, ticket.cached, result);
  } catch (error) {
    if (error instanceof JobFailedError) {
      return { ok: false, error: `solver failed: ${error.reason}` };
    }
    return { ok: false, error: error instanceof Error ? error.message : String(error) };
  } finally {
    controls.running = false;
  }
}

export function buildPanel(jobId: string, cached: boolean, result: JobResult): ResultPanel {
  return {
    ok: true,
    jobId,
    cached,
    banner: hiresBanner(result.hires_accepted ?? 0),
    objective: result.objective,
    stopReason: result.stop_reason,
    kpis: kpiRows(result.kpis, result.kpi_delta),
    roster: result.roster,
  };
}

export function renderBanner(panel: PanelState): string {
  if (!panel.ok) {
    return `<div class="banner banner-error">${panel.error}</div>`;
  }
  const cacheNote = panel.cached ? ' <span class="badge badge-cache">cached</span>' : '';
  return `<div class="banner banner-result">${panel.banner}${cacheNote}</div>`;
}
