/** Session view: the analyst's estimation loop in one page.
 *
 * Every displayed number originates from a server response; this module owns
 * layout and event wiring only. The loop it supports: upload a series,
 * review the overlay and the fit quality, adjust zeta/tau1/tau2, launch a
 * sampling round (a background job observed by polling), repeat, finalize.
 */

import { ApiClient, ApiError } from "./api.js";
import { badgeFor, conditionBreakdown } from "./badge.js";
import { renderOverlay } from "./chart.js";
import { submitGuard, validateAdjustment } from "./controls.js";
import { pollJob } from "./poll.js";
import type { PreviewDoc, SessionDoc, StabilityDoc } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  id?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (id) node.id = id;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** Blob.text() with a FileReader fallback for environments without it. */
export function readFileText(file: File): Promise<string> {
  if (typeof file.text === "function") {
    return file.text();
  }
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onload = () => resolve(String(reader.result ?? ""));
    reader.onerror = () => reject(reader.error ?? new Error("file read failed"));
    reader.readAsText(file);
  });
}

export class SessionApp {
  private api: ApiClient;
  private sessionId: string | null = null;
  private session: SessionDoc | null = null;
  private whatIf: { t: number[]; values: number[] } | undefined;

  readonly runFit: () => Promise<boolean>;

  constructor(private readonly root: HTMLElement, api: ApiClient) {
    this.api = api;
    this.runFit = submitGuard(() => this.doRunFit());
    this.buildSkeleton();
  }

  setApi(api: ApiClient): void {
    this.api = api;
  }

  // -- layout --------------------------------------------------------------

  private buildSkeleton(): void {
    this.root.textContent = "";

    const header = el("header");
    const fileInput = el("input", "series-file") as HTMLInputElement;
    fileInput.type = "file";
    fileInput.accept = ".csv,text/csv";
    const createBtn = el("button", "create-btn", "Create session");
    createBtn.addEventListener("click", () => void this.onCreate());
    header.append(fileInput, createBtn, el("span", "status-line", ""));
    this.root.appendChild(header);

    const chart = el("section", "chart");
    this.root.appendChild(chart);
    renderOverlay(chart, [], [], []);

    const readouts = el("section", "readouts");
    const r2Row = el("div");
    r2Row.append(el("span", undefined, "R2: "), el("span", "r2-value", "-"));
    const badgeRow = el("div");
    badgeRow.append(el("span", "stability-badge", "-"), el("ul", "badge-breakdown"));
    readouts.append(r2Row, badgeRow);
    this.root.appendChild(readouts);

    const controls = el("section", "controls");
    for (const name of ["zeta", "tau1", "tau2"] as const) {
      const label = el("label", undefined, `${name} `);
      const input = el("input", `${name}-input`) as HTMLInputElement;
      input.type = "number";
      input.step = "any";
      input.addEventListener("change", () => void this.onPreview());
      label.appendChild(input);
      controls.appendChild(label);
    }
    const runBtn = el("button", "run-fit", "Run fit round");
    runBtn.addEventListener("click", () => void this.runFit());
    const finalizeBtn = el("button", "finalize-btn", "Finalize");
    finalizeBtn.addEventListener("click", () => void this.onFinalize());
    controls.append(
      runBtn,
      finalizeBtn,
      el("span", "validation-msg", ""),
      el("progress", "job-progress") as HTMLProgressElement,
    );
    (controls.querySelector("#job-progress") as HTMLProgressElement).max = 1;
    this.root.appendChild(controls);

    const history = el("section");
    history.append(el("h2", undefined, "Rounds"), el("ol", "history"));
    this.root.appendChild(history);
  }

  private get<T extends HTMLElement>(id: string): T {
    return this.root.querySelector(`#${id}`) as T;
  }

  private note(text: string): void {
    this.get<HTMLSpanElement>("status-line").textContent = text;
  }

  // -- actions --------------------------------------------------------------

  private async onCreate(): Promise<void> {
    const input = this.get<HTMLInputElement>("series-file");
    const file = input.files?.[0];
    if (!file) {
      this.note("choose a series file first");
      return;
    }
    try {
      const csv = await readFileText(file);
      this.sessionId = await this.api.createSession(csv);
      this.note(`session ${this.sessionId}`);
      await this.refresh();
    } catch (err) {
      this.note(err instanceof Error ? err.message : String(err));
    }
  }

  private adjustmentFromInputs() {
    return {
      zeta: Number(this.get<HTMLInputElement>("zeta-input").value),
      tau1: Number(this.get<HTMLInputElement>("tau1-input").value),
      tau2: Number(this.get<HTMLInputElement>("tau2-input").value),
    };
  }

  private setControlsEnabled(enabled: boolean): void {
    for (const id of ["zeta-input", "tau1-input", "tau2-input"]) {
      this.get<HTMLInputElement>(id).disabled = !enabled;
    }
    this.get<HTMLButtonElement>("run-fit").disabled = !enabled;
    this.get<HTMLButtonElement>("finalize-btn").disabled = !enabled;
  }

  private async doRunFit(): Promise<void> {
    if (!this.sessionId) {
      this.note("no session yet");
      return;
    }
    const adjustment = this.adjustmentFromInputs();
    const problem = validateAdjustment(adjustment);
    const msg = this.get<HTMLSpanElement>("validation-msg");
    if (problem) {
      msg.textContent = problem;
      return;
    }
    msg.textContent = "";
    const progress = this.get<HTMLProgressElement>("job-progress");
    this.setControlsEnabled(false);
    try {
      const jobId = await this.api.startFit(this.sessionId, adjustment);
      const job = await pollJob(this.api, jobId, {
        intervalMs: 400,
        onUpdate: (j) => {
          progress.value = j.progress;
        },
      });
      if (job.status === "Failed") {
        this.note(`fit failed: ${job.error ?? "unknown error"}`);
      } else {
        this.note("round complete");
      }
      await this.refresh();
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.note("a fit is already running for this session");
      } else {
        this.note(err instanceof Error ? err.message : String(err));
      }
    } finally {
      this.setControlsEnabled(true);
    }
  }

  private async onFinalize(): Promise<void> {
    if (!this.sessionId) return;
    try {
      const report = await this.api.finalize(this.sessionId);
      this.note(`finalized at R2 ${report.fit.r2}`);
      await this.refresh();
    } catch (err) {
      this.note(err instanceof Error ? err.message : String(err));
    }
  }

  /** What-if preview; triggered on input commit, never continuously
   * (each preview is a full integration server-side). */
  private async onPreview(): Promise<void> {
    if (!this.session) return;
    const adjustment = this.adjustmentFromInputs();
    if (validateAdjustment(adjustment)) return;
    const doc = this.session;
    const horizon = doc.observed.times[doc.observed.times.length - 1];
    try {
      const preview: PreviewDoc = await this.api.simulate({
        alpha: doc.theta.alpha,
        beta: doc.theta.beta,
        gamma: doc.theta.gamma,
        delta: doc.theta.delta,
        epsilon: doc.theta.epsilon,
        zeta: adjustment.zeta,
        tau1: adjustment.tau1,
        tau2: adjustment.tau2,
        horizon,
        step: doc.run.step,
        initial_state: doc.run.initial_state,
      });
      this.whatIf = { t: preview.t, values: preview.y2 };
      this.renderChart();
    } catch (err) {
      this.note(err instanceof Error ? err.message : String(err));
    }
  }

  // -- rendering -------------------------------------------------------------

  async refresh(): Promise<void> {
    if (!this.sessionId) return;
    this.session = await this.api.getSession(this.sessionId);
    const doc = this.session;

    this.get<HTMLInputElement>("zeta-input").value = String(doc.fixed.zeta);
    this.get<HTMLInputElement>("tau1-input").value = String(doc.fixed.tau1);
    this.get<HTMLInputElement>("tau2-input").value = String(doc.fixed.tau2);

    const latest = doc.iterations[doc.iterations.length - 1];
    this.get<HTMLSpanElement>("r2-value").textContent = latest
      ? String(latest.report.fit.r2)
      : "-";

    let stability: StabilityDoc | null = latest ? latest.report.stability : null;
    if (!stability) {
      try {
        stability = await this.api.getStability(doc.session_id);
      } catch {
        stability = null;
      }
    }
    const badgeNode = this.get<HTMLSpanElement>("stability-badge");
    const breakdown = this.get<HTMLUListElement>("badge-breakdown");
    breakdown.textContent = "";
    if (stability) {
      const badge = badgeFor(stability.verdict);
      badgeNode.textContent = badge.label;
      badgeNode.className = badge.cssClass;
      for (const line of conditionBreakdown(stability)) {
        breakdown.appendChild(el("li", undefined, line));
      }
    } else {
      badgeNode.textContent = "-";
      badgeNode.className = "";
    }

    const history = this.get<HTMLOListElement>("history");
    history.textContent = "";
    for (const entry of [...doc.iterations].sort((a, b) => a.index - b.index)) {
      const adj = entry.adjustment;
      history.appendChild(
        el(
          "li",
          undefined,
          `round ${entry.index}: zeta=${adj.zeta} tau1=${adj.tau1} tau2=${adj.tau2} ` +
            `R2=${entry.report.fit.r2} ${entry.report.stability.verdict}`,
        ),
      );
    }

    this.renderChart();
  }

  private renderChart(): void {
    const chart = this.get<HTMLElement>("chart");
    const doc = this.session;
    if (!doc) {
      renderOverlay(chart, [], [], []);
      return;
    }
    const latest = doc.iterations[doc.iterations.length - 1];
    const predicted = latest ? latest.report.overlay.predicted : [];
    renderOverlay(chart, doc.observed.times, doc.observed.values, predicted, this.whatIf);
  }
}

export function mountApp(root: HTMLElement, api: ApiClient): SessionApp {
  return new SessionApp(root, api);
}
