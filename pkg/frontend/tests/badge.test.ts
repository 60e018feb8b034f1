import { describe, expect, it } from "vitest";

import { badgeFor, conditionBreakdown } from "../src/badge.js";
import type { StabilityDoc } from "../src/types.js";

describe("badgeFor", () => {
  it("maps each verdict onto exactly one badge state", () => {
    expect(badgeFor("SufficientStable")).toEqual({
      label: "SufficientStable",
      cssClass: "badge-stable",
    });
    expect(badgeFor("Inconclusive")).toEqual({
      label: "Inconclusive",
      cssClass: "badge-inconclusive",
    });
  });
});

describe("conditionBreakdown", () => {
  const doc: StabilityDoc = {
    verdict: "Inconclusive",
    conditions: {
      cond6: true,
      cond7: false,
      cond8: true,
      cond9: null,
      cond10: false,
      cond11: null,
    },
    quantities: { A: 0.8, B: 0.13 },
  };

  it("renders all six conditions in order", () => {
    const lines = conditionBreakdown(doc);
    expect(lines).toEqual([
      "cond6: ok",
      "cond7: no",
      "cond8: ok",
      "cond9: n/a",
      "cond10: no",
      "cond11: n/a",
    ]);
  });
});
