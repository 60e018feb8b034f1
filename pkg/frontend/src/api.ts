/** Typed client for the boomkit HTTP service. All model numbers shown in the
 * UI originate from these responses; the client never computes any itself. */

import type {
  Adjustment,
  JobDoc,
  McmcOverrides,
  PreviewDoc,
  ReportDoc,
  SessionDoc,
  SimulateRequest,
  StabilityDoc,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const message =
      typeof body === "object" && body !== null && "error" in body
        ? String((body as { error: unknown }).error)
        : `HTTP ${response.status}`;
    throw new ApiError(response.status, message);
  }
  return body as T;
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async createSession(seriesCsv: string, configText?: string): Promise<string> {
    const form = new FormData();
    form.append("series", new Blob([seriesCsv], { type: "text/csv" }), "series.csv");
    if (configText !== undefined) {
      form.append("config", new Blob([configText], { type: "text/plain" }), "run.cfg");
    }
    const body = await unwrap<{ session_id: string }>(
      await fetch(this.url("/sessions"), { method: "POST", body: form }),
    );
    return body.session_id;
  }

  async getSession(sessionId: string): Promise<SessionDoc> {
    return unwrap(await fetch(this.url(`/sessions/${sessionId}`)));
  }

  async startFit(
    sessionId: string,
    adjustment?: Adjustment,
    mcmc?: McmcOverrides,
  ): Promise<string> {
    const body = await unwrap<{ job_id: string }>(
      await fetch(this.url(`/sessions/${sessionId}/fit`), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ adjustment: adjustment ?? null, mcmc: mcmc ?? null }),
      }),
    );
    return body.job_id;
  }

  async getJob(jobId: string): Promise<JobDoc> {
    return unwrap(await fetch(this.url(`/jobs/${jobId}`)));
  }

  async getStability(sessionId: string): Promise<StabilityDoc> {
    return unwrap(await fetch(this.url(`/sessions/${sessionId}/stability`)));
  }

  async finalize(sessionId: string): Promise<ReportDoc> {
    return unwrap(
      await fetch(this.url(`/sessions/${sessionId}/finalize`), { method: "POST" }),
    );
  }

  async simulate(request: SimulateRequest): Promise<PreviewDoc> {
    return unwrap(
      await fetch(this.url("/simulate"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(request),
      }),
    );
  }
}
