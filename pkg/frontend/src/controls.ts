/** Adjustment form logic: client-side delay validation and a submission
 * guard so a double click produces exactly one request. */

export interface AdjustmentValues {
  zeta: number;
  tau1: number;
  tau2: number;
}

export function validateAdjustment(values: AdjustmentValues): string | null {
  const { zeta, tau1, tau2 } = values;
  if (!Number.isFinite(zeta) || !Number.isFinite(tau1) || !Number.isFinite(tau2)) {
    return "all three values must be numbers";
  }
  if (tau1 < 0) {
    return "tau1 must be >= 0";
  }
  if (!(tau1 < tau2)) {
    return "tau1 must be strictly less than tau2";
  }
  return null;
}

/** Wraps an async submit handler so that repeat calls while one submission
 * is in flight (or within `quietMs` after it started) are dropped. */
export function submitGuard<T extends unknown[]>(
  action: (...args: T) => Promise<void>,
  quietMs = 300,
  now: () => number = Date.now,
): (...args: T) => Promise<boolean> {
  let inFlight = false;
  let lastStart = -Infinity;
  return async (...args: T) => {
    const at = now();
    if (inFlight || at - lastStart < quietMs) {
      return false;
    }
    inFlight = true;
    lastStart = at;
    try {
      await action(...args);
    } finally {
      inFlight = false;
    }
    return true;
  };
}
