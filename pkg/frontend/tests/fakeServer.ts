/** In-test stand-in for the boomkit HTTP service, faithful to the wire
 * contract the UI consumes: session documents, fit jobs that advance across
 * polls, stability docs and previews. */

import type {
  IterationDoc,
  JobDoc,
  ReportDoc,
  SessionDoc,
  StabilityDoc,
} from "../src/types.js";

function blobText(blob: Blob): Promise<string> {
  if (typeof blob.text === "function") {
    return blob.text();
  }
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onload = () => resolve(String(reader.result ?? ""));
    reader.onerror = () => reject(reader.error ?? new Error("blob read failed"));
    reader.readAsText(blob);
  });
}

const STABLE: StabilityDoc = {
  verdict: "SufficientStable",
  conditions: {
    cond6: true, cond7: true, cond8: true, cond9: true,
    cond10: false, cond11: false,
  },
  quantities: { A: 0.8, B: 0.13, cond7_bound: 2.6, resurgence_bound: 23.93 },
};

export const REPORT_R2 = 0.987654321;

function parseCsv(text: string): { times: number[]; values: number[] } {
  const rows = text.trim().split("\n").slice(1);
  const times: number[] = [];
  const values: number[] = [];
  for (const row of rows) {
    const [t, v] = row.split(",");
    times.push(Number(t));
    values.push(Number(v));
  }
  return { times, values };
}

function heuristics(times: number[], values: number[]) {
  let first = -1;
  let biggest = -1;
  for (let i = 1; i < values.length - 1; i++) {
    if (values[i] > values[i - 1] && values[i] > values[i + 1]) {
      if (first < 0) first = i;
      else if (biggest < 0 || values[i] > values[biggest]) biggest = i;
    }
  }
  const tau1 = first >= 0 ? times[first] - times[0] : (times[times.length - 1] - times[0]) / 4;
  let tau2 = biggest >= 0 ? times[biggest] - times[first] : 2 * tau1;
  if (tau2 <= tau1) tau2 = 2 * tau1;
  return { zeta0: 0.05 * Math.max(...values), tau1_0: tau1, tau2_0: tau2 };
}

function makeReport(session: SessionDoc): ReportDoc {
  const t = session.observed.times;
  return {
    kind: "fit_report",
    params: {
      ...session.theta,
      zeta: session.fixed.zeta,
      tau1: session.fixed.tau1,
      tau2: session.fixed.tau2,
    },
    fit: {
      r2: REPORT_R2,
      rmse: 0.42,
      r2_note: "centered residuals",
      selection_rule: "max_r2",
    },
    stability: STABLE,
    overlay: {
      t: [...t],
      observed: [...session.observed.values],
      predicted: session.observed.values.map((v) => v * 0.97),
    },
    chain: {
      n_iter: 20000,
      burn_in: 5000,
      seed: 0,
      acceptance_rate: 0.41,
      posterior: Object.fromEntries(
        Object.entries(session.theta).map(([k, v]) => [
          k,
          { mean: v, std: 0.01, lo95: v - 0.02, hi95: v + 0.02 },
        ]),
      ),
    },
    run: { initial_state: [1, 0.01, 0, 0], sigma_obs: 0.5, step: 0.25 },
  };
}

interface FakeJob {
  doc: JobDoc;
  polls: number;
  adjustment: { zeta: number; tau1: number; tau2: number };
}

export class FakeServer {
  sessions = new Map<string, SessionDoc>();
  jobs = new Map<string, FakeJob>();
  fitRequests = 0;
  private nextId = 1;

  fetch = async (url: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const path = String(url);
    const method = init?.method ?? "GET";

    if (method === "POST" && path.endsWith("/sessions")) {
      const form = init?.body as FormData;
      const blob = form.get("series") as Blob;
      const text = await blobText(blob);
      if (!text.trim()) return this.error(400, "series upload is empty");
      const { times, values } = parseCsv(text);
      const g = heuristics(times, values);
      const id = `sess-${this.nextId++}`;
      this.sessions.set(id, {
        kind: "pes_session",
        session_id: id,
        status: "Draft",
        observed: { times, values, label: "synthetic", scale: 1 },
        theta: { alpha: 1, beta: 0.5, gamma: 0.5, delta: 0.1, epsilon: 0.2 },
        fixed: { zeta: g.zeta0, tau1: g.tau1_0, tau2: g.tau2_0 },
        run: { initial_state: [1, 0.01, 0, 0], sigma_obs: 0.5, step: 0.25, seed: 0 },
        guesses: { ...g, fallback: false },
        iterations: [],
      });
      return this.json({ session_id: id }, 201);
    }

    let m = path.match(/\/sessions\/([^/]+)\/fit$/);
    if (m && method === "POST") {
      const session = this.sessions.get(m[1]);
      if (!session) return this.error(404, "unknown session");
      for (const job of this.jobs.values()) {
        if (job.doc.session_id === m[1] && job.doc.status !== "Done" && job.doc.status !== "Failed") {
          return this.error(409, "a fit job is already running for this session");
        }
      }
      const body = JSON.parse(String(init?.body)) as {
        adjustment: { zeta?: number; tau1?: number; tau2?: number } | null;
      };
      const adj = {
        zeta: body.adjustment?.zeta ?? session.fixed.zeta,
        tau1: body.adjustment?.tau1 ?? session.fixed.tau1,
        tau2: body.adjustment?.tau2 ?? session.fixed.tau2,
      };
      if (!(adj.tau1 >= 0 && adj.tau1 < adj.tau2)) {
        return this.error(400, "adjustment rejected");
      }
      this.fitRequests += 1;
      const jobId = `job-${this.nextId++}`;
      this.jobs.set(jobId, {
        doc: {
          job_id: jobId, kind: "fit", status: "Queued", progress: 0,
          session_id: m[1], error: null, result: null,
        },
        polls: 0,
        adjustment: adj,
      });
      return this.json({ job_id: jobId }, 202);
    }

    m = path.match(/\/jobs\/([^/]+)$/);
    if (m && method === "GET") {
      const job = this.jobs.get(m[1]);
      if (!job) return this.error(404, "unknown job");
      job.polls += 1;
      if (job.doc.status === "Queued") {
        job.doc.status = "Running";
        job.doc.progress = 0.5;
      } else if (job.doc.status === "Running") {
        const session = this.sessions.get(job.doc.session_id)!;
        session.fixed = { ...job.adjustment };
        const report = makeReport(session);
        const entry: IterationDoc = {
          index: session.iterations.length,
          adjustment: { ...job.adjustment },
          timestamp: 1700000000 + session.iterations.length,
          report,
        };
        session.iterations.push(entry);
        session.status = "AwaitingReview";
        job.doc.status = "Done";
        job.doc.progress = 1;
        job.doc.result = report;
      }
      return this.json(job.doc);
    }

    m = path.match(/\/sessions\/([^/]+)\/stability$/);
    if (m && method === "GET") {
      if (!this.sessions.has(m[1])) return this.error(404, "unknown session");
      return this.json(STABLE);
    }

    m = path.match(/\/sessions\/([^/]+)\/finalize$/);
    if (m && method === "POST") {
      const session = this.sessions.get(m[1]);
      if (!session) return this.error(404, "unknown session");
      if (!session.iterations.length) return this.error(400, "no rounds");
      session.status = "Finalized";
      const best = [...session.iterations].sort((a, b) => b.report.fit.r2 - a.report.fit.r2)[0];
      return this.json(best.report);
    }

    m = path.match(/\/sessions\/([^/]+)$/);
    if (m && method === "GET") {
      const session = this.sessions.get(m[1]);
      if (!session) return this.error(404, "unknown session");
      return this.json(session);
    }

    if (method === "POST" && path.endsWith("/simulate")) {
      const req = JSON.parse(String(init?.body)) as { horizon: number; step: number };
      const n = Math.min(50, Math.max(2, Math.round(req.horizon / req.step)));
      const t = Array.from({ length: n }, (_, i) => (i * req.horizon) / (n - 1));
      const curve = t.map((x) => 0.0625 + 0.05 * Math.exp(-x / 10));
      return this.json({ t, y1: curve, y2: curve, y3: curve, y4: curve });
    }

    return this.error(404, `unhandled ${method} ${path}`);
  };

  private json(body: unknown, status = 200): Response {
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  }

  private error(status: number, message: string): Response {
    return this.json({ error: message }, status);
  }
}
