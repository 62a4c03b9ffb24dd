import type { DayShiftRow, NurseDayCell, RosterViews } from './types.js';

export const REST = 'REST';
export const POST_NIGHT_REST = 'POST-NIGHT-REST';

export interface ScheduleView {
  mode: 'by-nurse' | 'by-day';
  key: string;
  rows: NurseDayCell[] | DayShiftRow[];
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function cellClass(entry: string): string {
  if (entry === REST) {
    return 'cell-rest';
  }
  if (entry === POST_NIGHT_REST) {
    return 'cell-post-night-rest';
  }
  return 'cell-shift';
}

/**
 * One row per day for a single nurse. Each cell carries exactly one entry
 * (a shift id or a rest marker) — the service guarantees at most one shift
 * per nurse per day, and this renderer refuses anything else.
 */
export function renderByNurse(nurseId: string, rows: NurseDayCell[]): string {
  const seen = new Set<string>();
  const body = rows
    .map((cell) => {
      if (seen.has(cell.day)) {
        throw new Error(`duplicate day ${cell.day} in sheet for ${nurseId}`);
      }
      seen.add(cell.day);
      const hours = cell.hours > 0 ? ` (${cell.hours}h)` : '';
      return (
        `<tr><td>${escapeHtml(cell.day)}</td>` +
        `<td class="${cellClass(cell.entry)}">${escapeHtml(cell.entry)}${hours}</td></tr>`
      );
    })
    .join('');
  return (
    `<table class="sheet" data-nurse="${escapeHtml(nurseId)}">` +
    `<thead><tr><th>Day</th><th>Duty</th></tr></thead>` +
    `<tbody>${body}</tbody></table>`
  );
}

export function slackBadge(slack: number): string {
  if (slack <= 0) {
    return '';
  }
  return `<span class="badge badge-slack">+${slack} unfilled</span>`;
}

/** Shifts of one day with assigned-nurse chips and a red badge when j > 0. */
export function renderByDay(day: string, rows: DayShiftRow[]): string {
  const body = rows
    .map((row) => {
      const chips = row.nurses
        .map((n) => `<span class="chip">${escapeHtml(n)}</span>`)
        .join('');
      return (
        `<tr><td>${escapeHtml(row.shift)}</td>` +
        `<td>${chips}${slackBadge(row.slack)}</td></tr>`
      );
    })
    .join('');
  return (
    `<table class="day-view" data-day="${escapeHtml(day)}">` +
    `<thead><tr><th>Shift</th><th>Nurses</th></tr></thead>` +
    `<tbody>${body}</tbody></table>`
  );
}

export function renderScheduleView(view: ScheduleView): string {
  if (view.mode === 'by-nurse') {
    return renderByNurse(view.key, view.rows as NurseDayCell[]);
  }
  return renderByDay(view.key, view.rows as DayShiftRow[]);
}

/** Dropdown option lists for the two view modes. */
export function viewOptions(views: RosterViews): { nurses: string[]; days: string[] } {
  return {
    nurses: Object.keys(views.by_nurse).sort(),
    days: Object.keys(views.by_day),
  };
}
