import { describe, expect, it } from "vitest";

import { canSubmit, draftToBody, parseAge } from "../src/draft";

describe("parseAge", () => {
  it("accepts integers in range", () => {
    expect(parseAge("0")).toBe(0);
    expect(parseAge("105")).toBe(105);
    expect(parseAge(" 63 ")).toBe(63);
  });

  it("rejects out-of-range and non-integers", () => {
    expect(parseAge("200")).toBeNull();
    expect(parseAge("-3")).toBeNull();
    expect(parseAge("41.5")).toBeNull();
    expect(parseAge("old")).toBeNull();
    expect(parseAge("")).toBeNull();
  });
});

describe("canSubmit", () => {
  it("requires a choice", () => {
    expect(canSubmit({ choice: null, ageText: "50" })).toBe(false);
  });

  it("requires a valid age for definite choices", () => {
    expect(canSubmit({ choice: "left", ageText: "" })).toBe(false);
    expect(canSubmit({ choice: "left", ageText: "200" })).toBe(false);
    expect(canSubmit({ choice: "left", ageText: "50" })).toBe(true);
    expect(canSubmit({ choice: "right", ageText: "0" })).toBe(true);
  });

  it("lets not-sure through without an estimate", () => {
    expect(canSubmit({ choice: "not_sure", ageText: "" })).toBe(true);
    expect(canSubmit({ choice: "not_sure", ageText: "44" })).toBe(true);
    expect(canSubmit({ choice: "not_sure", ageText: "banana" })).toBe(false);
  });
});

describe("draftToBody", () => {
  it("builds a submit body with the estimate when present", () => {
    const body = draftToBody({ choice: "right", ageText: "61" }, "p1", 1234.6);
    expect(body).toEqual({
      pair_id: "p1",
      choice: "right",
      age_estimate_years: 61,
      elapsed_ms: 1235,
    });
  });

  it("omits the estimate for bare not-sure", () => {
    const body = draftToBody({ choice: "not_sure", ageText: "" }, "p2", 10);
    expect(body).toEqual({ pair_id: "p2", choice: "not_sure", elapsed_ms: 10 });
  });

  it("refuses unsubmittable drafts", () => {
    expect(() => draftToBody({ choice: "left", ageText: "" }, "p3", 5)).toThrow();
  });
});
