import type {
  ApiErrorBody,
  JobKind,
  JobParams,
  JobPoll,
  JobResult,
  JobTicket,
  KpisResponse,
  RosterViews,
  RosterViewResponse,
  SessionCreated,
} from './types.js';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

const DEFAULT_POLL_INTERVAL_MS = 250;
const DEFAULT_POLL_TIMEOUT_MS = 120_000;

/** Non-2xx service reply, carrying the structured error body. */
export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly locations: ApiErrorBody['locations'];

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.name = 'ApiError';
    this.status = status;
    this.code = body.code;
    this.locations = body.locations ?? [];
  }
}

/** A submitted job finished with status=failed. */
export class JobFailedError extends Error {
  constructor(readonly jobId: string, readonly reason: string) {
    super(`job ${jobId} failed: ${reason}`);
    this.name = 'JobFailedError';
  }
}

async function request<T>(
  fetchFn: FetchLike,
  url: string,
  init?: RequestInit
): Promise<T> {
  const response = await fetchFn(url, init);
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(response.status, body as ApiErrorBody);
  }
  return body as T;
}

const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

export interface PollOptions {
  intervalMs?: number;
  timeoutMs?: number;
}

export class PlannerClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init)
  ) {}

  private post<T>(path: string, payload: unknown): Promise<T> {
    return request<T>(this.fetchFn, `${this.baseUrl}${path}`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(payload),
    });
  }

  private get<T>(path: string): Promise<T> {
    return request<T>(this.fetchFn, `${this.baseUrl}${path}`);
  }

  createSession(instancePayload: unknown): Promise<SessionCreated> {
    return this.post<SessionCreated>('/api/sessions', instancePayload);
  }

  submitJob(sessionId: string, kind: JobKind, params: JobParams): Promise<JobTicket> {
    return this.post<JobTicket>(`/api/sessions/${sessionId}/jobs`, { kind, params });
  }

  getJob(jobId: string): Promise<JobPoll> {
    return this.get<JobPoll>(`/api/jobs/${jobId}`);
  }

  /** Poll until the job reaches a terminal state; rejects on failure/timeout. */
  async pollJob(jobId: string, options: PollOptions = {}): Promise<JobResult> {
    const interval = options.intervalMs ?? DEFAULT_POLL_INTERVAL_MS;
    const deadline = Date.now() + (options.timeoutMs ?? DEFAULT_POLL_TIMEOUT_MS);
    for (;;) {
      const poll = await this.getJob(jobId);
      if (poll.status === 'done') {
        return poll;
      }
      if (poll.status === 'failed') {
        throw new JobFailedError(jobId, poll.reason);
      }
      if (Date.now() >= deadline) {
        throw new Error(`timed out waiting for job ${jobId}`);
      }
      await sleep(interval);
    }
  }

  getRosterViews(sessionId: string): Promise<RosterViews> {
    return this.get<RosterViews>(`/api/sessions/${sessionId}/roster`);
  }

  getRosterView(sessionId: string, view: string): Promise<RosterViewResponse> {
    return this.get<RosterViewResponse>(
      `/api/sessions/${sessionId}/roster?view=${encodeURIComponent(view)}`
    );
  }

  getKpis(sessionId: string): Promise<KpisResponse> {
    return this.get<KpisResponse>(`/api/sessions/${sessionId}/kpis`);
  }
}
