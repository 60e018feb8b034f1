/** Poll a fit job until it reaches a terminal state. */

import type { ApiClient } from "./api.js";
import type { JobDoc } from "./types.js";

export interface PollOptions {
  intervalMs?: number;
  timeoutMs?: number;
  onUpdate?: (job: JobDoc) => void;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((r) => setTimeout(r, ms));

export async function pollJob(
  api: ApiClient,
  jobId: string,
  options: PollOptions = {},
): Promise<JobDoc> {
  const intervalMs = options.intervalMs ?? 500;
  const timeoutMs = options.timeoutMs ?? 10 * 60 * 1000;
  const sleep = options.sleep ?? defaultSleep;
  const started = Date.now();
  for (;;) {
    const job = await api.getJob(jobId);
    options.onUpdate?.(job);
    if (job.status === "Done" || job.status === "Failed") {
      return job;
    }
    if (Date.now() - started > timeoutMs) {
      throw new Error(`job ${jobId} still ${job.status} after ${timeoutMs}ms`);
    }
    await sleep(intervalMs);
  }
}
