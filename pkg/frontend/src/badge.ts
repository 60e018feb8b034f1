/** Stability badge: a 1:1 mapping from server verdicts to display states. */

import type { StabilityDoc, VerdictLabel } from "./types.js";

export interface BadgeState {
  label: string;
  cssClass: string;
}

const BADGES: Record<VerdictLabel, BadgeState> = {
  SufficientStable: { label: "SufficientStable", cssClass: "badge-stable" },
  Inconclusive: { label: "Inconclusive", cssClass: "badge-inconclusive" },
};

export function badgeFor(verdict: VerdictLabel): BadgeState {
  return BADGES[verdict];
}

const CONDITION_ORDER = ["cond6", "cond7", "cond8", "cond9", "cond10", "cond11"];

/** One line per condition: check mark, cross, or n/a for not evaluable. */
export function conditionBreakdown(doc: StabilityDoc): string[] {
  return CONDITION_ORDER.map((key) => {
    const state = doc.conditions[key];
    const mark = state === null || state === undefined ? "n/a" : state ? "ok" : "no";
    return `${key}: ${mark}`;
  });
}
