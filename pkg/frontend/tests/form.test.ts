import { describe, expect, it } from "vitest";

import { canSubmit, emptyForm, quantizeDegree, toRequestBody } from "../src/form.js";
import type { QueryForm } from "../src/form.js";

function formWith(rows: QueryForm["rows"], extra: Partial<QueryForm> = {}): QueryForm {
  return { ...emptyForm(), rows, ...extra };
}

describe("quantizeDegree", () => {
  it("snaps to the 0.01 slider step", () => {
    expect(quantizeDegree(0.123)).toBe(0.12);
    expect(quantizeDegree(0.678)).toBe(0.68);
    expect(quantizeDegree(0.9)).toBe(0.9);
  });

  it("clamps into the unit interval", () => {
    expect(quantizeDegree(-0.4)).toBe(0);
    expect(quantizeDegree(1.7)).toBe(1);
  });

  it("treats NaN as zero and clamps infinities", () => {
    expect(quantizeDegree(Number.NaN)).toBe(0);
    expect(quantizeDegree(Number.POSITIVE_INFINITY)).toBe(1);
    expect(quantizeDegree(Number.NEGATIVE_INFINITY)).toBe(0);
  });
});

describe("canSubmit", () => {
  it("refuses an empty form", () => {
    expect(canSubmit(emptyForm())).toBe(false);
  });

  it("refuses rows without a positive degree", () => {
    expect(canSubmit(formWith([{ group: "objects", option: "the-signs", degree: 0 }]))).toBe(false);
  });

  it("refuses rows missing a group or option label", () => {
    expect(canSubmit(formWith([{ group: "", option: "the-signs", degree: 0.5 }]))).toBe(false);
    expect(canSubmit(formWith([{ group: "objects", option: "  ", degree: 0.5 }]))).toBe(false);
  });

  it("accepts once one complete row exists", () => {
    const rows = [
      { group: "", option: "", degree: 0 },
      { group: "objects", option: "the-signs", degree: 0.9 },
    ];
    expect(canSubmit(formWith(rows))).toBe(true);
  });
});

describe("toRequestBody", () => {
  it("groups object rows into simple attributes", () => {
    const form = formWith(
      [
        { group: "objects", option: "the-signs", degree: 0.9 },
        { group: "objects", option: "the-letters", degree: 0.6 },
      ],
      { label: "sample-query" },
    );
    expect(toRequestBody(form)).toEqual({
      kind: "objects",
      mode: "routed",
      label: "sample-query",
      description: {
        attributes: [
          {
            name: "objects",
            kind: "simple",
            possible: { "the-signs": 0.9, "the-letters": 0.6 },
          },
        ],
      },
    });
  });

  it("keeps distinct groups as separate attributes", () => {
    const form = formWith([
      { group: "objects", option: "the-signs", degree: 0.9 },
      { group: "direction", option: "forward", degree: 1 },
    ]);
    const body = toRequestBody(form) as { description: { attributes: unknown[] } };
    expect(body.description.attributes).toHaveLength(2);
  });

  it("builds a facets map for goal queries", () => {
    const form = formWith([{ group: "to-erase", option: "erasewithkey", degree: 1 }], {
      kind: "goals",
      mode: "exhaustive",
    });
    expect(toRequestBody(form)).toEqual({
      kind: "goals",
      mode: "exhaustive",
      description: { facets: { "to-erase": { possible: { erasewithkey: 1 } } } },
    });
  });

  it("drops incomplete rows and quantizes degrees", () => {
    const form = formWith([
      { group: "objects", option: "the-signs", degree: 0.876543 },
      { group: "", option: "ghost", degree: 0.5 },
      { group: "objects", option: "zeroed", degree: 0 },
    ]);
    expect(toRequestBody(form)).toEqual({
      kind: "objects",
      mode: "routed",
      description: {
        attributes: [{ name: "objects", kind: "simple", possible: { "the-signs": 0.88 } }],
      },
    });
  });

  it("omits a blank label so the server default applies", () => {
    const body = toRequestBody(formWith([{ group: "g", option: "o", degree: 0.3 }], { label: "  " }));
    expect("label" in body).toBe(false);
  });

  it("trims whitespace around group and option labels", () => {
    const body = toRequestBody(formWith([{ group: " objects ", option: " the-signs ", degree: 0.5 }]));
    expect(body.description).toEqual({
      attributes: [{ name: "objects", kind: "simple", possible: { "the-signs": 0.5 } }],
    });
  });
});
