/** Wire types mirroring the server's JSON documents. */

export type VerdictLabel = "SufficientStable" | "Inconclusive";

export interface StabilityDoc {
  verdict: VerdictLabel;
  conditions: Record<string, boolean | null>;
  quantities: Record<string, number | null>;
}

export interface OverlayDoc {
  t: number[];
  observed: number[];
  predicted: number[];
}

export interface PosteriorStat {
  mean: number;
  std: number;
  lo95: number;
  hi95: number;
}

export interface ReportDoc {
  kind: "fit_report";
  params: Record<string, number>;
  fit: { r2: number; rmse: number; r2_note: string; selection_rule: string };
  stability: StabilityDoc;
  overlay: OverlayDoc;
  chain: {
    n_iter: number;
    burn_in: number;
    seed: number;
    acceptance_rate: number;
    burn_in_used?: number;
    posterior: Record<string, PosteriorStat>;
  };
  run: { initial_state: number[]; sigma_obs: number; step: number };
}

export interface IterationDoc {
  index: number;
  adjustment: { zeta: number; tau1: number; tau2: number };
  timestamp: number;
  report: ReportDoc;
}

export interface SessionDoc {
  kind: "pes_session";
  session_id: string;
  status: "Draft" | "Running" | "AwaitingReview" | "Finalized";
  observed: { times: number[]; values: number[]; label: string; scale: number };
  theta: Record<string, number>;
  fixed: { zeta: number; tau1: number; tau2: number };
  run: { initial_state: number[]; sigma_obs: number; step: number; seed: number };
  guesses: { zeta0: number; tau1_0: number; tau2_0: number; fallback: boolean };
  iterations: IterationDoc[];
}

export interface JobDoc {
  job_id: string;
  kind: string;
  status: "Queued" | "Running" | "Done" | "Failed";
  progress: number;
  session_id: string;
  error: string | null;
  result: ReportDoc | null;
}

export interface PreviewDoc {
  t: number[];
  y1: number[];
  y2: number[];
  y3: number[];
  y4: number[];
}

export interface Adjustment {
  zeta?: number;
  tau1?: number;
  tau2?: number;
}

export interface McmcOverrides {
  n_iter?: number;
  burn_in?: number;
  seed?: number;
  scales?: number[];
  sigma_obs?: number;
}

export interface SimulateRequest {
  alpha: number;
  beta: number;
  gamma: number;
  delta: number;
  epsilon: number;
  zeta: number;
  tau1: number;
  tau2: number;
  horizon: number;
  step: number;
  initial_state?: number[];
}
