/** JSON shapes exchanged with the planner service. */

export interface SessionCreated {
  id: string;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  locations: ErrorLocation[];
}

export interface ErrorLocation {
  file: string | null;
  line: number | null;
  field: string | null;
  message: string;
}

export type JobKind = 'solve' | 'staff-plan';

export interface JobParams {
  p1?: number;
  hire_cost?: number;
  big_m?: number;
  time_limit?: number;
  max_hires?: number;
  template?: { h_min: number; h_std: number; h_max: number };
}

export interface JobTicket {
  job_id: string;
  cached: boolean;
  cache_hits: number;
}

export type JobStatus = 'queued' | 'running' | 'done' | 'failed';

export interface KpiReport {
  nurse_count: number;
  min_workload: number;
  max_workload: number;
  min_weekly_hours: number;
  max_weekly_hours: number;
  total_overtime_hours: number;
  per_nurse_overtime: Record<string, number>;
  total_slack_units: number;
  objective: number;
}

/** Field-wise after - before differences against the session baseline. */
export interface KpiDelta {
  nurse_count: number;
  min_workload: number;
  max_workload: number;
  min_weekly_hours: number;
  max_weekly_hours: number;
  total_overtime_hours: number;
  total_slack_units: number;
  objective: number;
}

export interface UnderstaffingEntry {
  shift: string;
  day: string;
  shortfall_patients: number;
  slack_nurses: number;
}

export interface NurseDayCell {
  day: string;
  /** Shift id, or the sentinel REST / POST-NIGHT-REST markers. */
  entry: string;
  hours: number;
}

export interface DayShiftRow {
  shift: string;
  nurses: string[];
  slack: number;
}

export interface RosterViews {
  by_nurse: Record<string, NurseDayCell[]>;
  by_day: Record<string, DayShiftRow[]>;
}

export interface HiringIteration {
  nurse_count: number;
  objective: number;
  total_slack: number;
  kpis: KpiReport;
}

export interface JobResult {
  status: 'done';
  kind: JobKind;
  params: Record<string, unknown>;
  objective: number;
  kpis: KpiReport;
  kpi_delta: KpiDelta;
  understaffing: { entries: UnderstaffingEntry[]; total_slack: number };
  roster: RosterViews;
  solver_status?: string;
  gap?: number;
  nodes?: number;
  hires_accepted?: number;
  stop_reason?: string;
  iterations?: HiringIteration[];
}

export type JobPoll =
  | { status: 'queued' | 'running' }
  | { status: 'failed'; reason: string }
  | JobResult;

export interface RosterViewResponse {
  mode: 'by-nurse' | 'by-day';
  key: string;
  rows: NurseDayCell[] | DayShiftRow[];
}

export interface KpisResponse {
  kpis: KpiReport;
  kpi_delta: KpiDelta;
  job_id: string;
}
