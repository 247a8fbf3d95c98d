import { JSDOM } from "jsdom";
import { describe, expect, it } from "vitest";

import { parseCsv, renderReport, sessionCounts } from "../src/admin";

const CSV = [
  "session_id,participant_id,pair_id,choice,age_estimate_years,estimated_image,elapsed_ms",
  "s1,alice,pair0000,first_older,60,first,1200",
  "s1,alice,pair0001,not_sure,,,900",
  "s2,bob,pair0000,second_older,43,second,1500",
].join("\n") + "\n";

describe("parseCsv", () => {
  it("parses rows into records", () => {
    const rows = parseCsv(CSV);
    expect(rows).toHaveLength(3);
    expect(rows[0].participant_id).toBe("alice");
    expect(rows[1].age_estimate_years).toBe("");
  });

  it("handles empty exports", () => {
    expect(parseCsv("")).toHaveLength(0);
  });
});

describe("sessionCounts", () => {
  it("counts responses per session", () => {
    const counts = sessionCounts(parseCsv(CSV));
    expect(counts.get("alice (s1)")).toBe(2);
    expect(counts.get("bob (s2)")).toBe(1);
  });
});

describe("renderReport", () => {
  it("renders summary figures and bucket rows", () => {
    const dom = new JSDOM("<div id='r'></div>", { url: "http://localhost/" });
    const target = dom.window.document.getElementById("r") as HTMLElement;
    renderReport(dom.window.document, target, {
      n_responses: 200,
      success_all: 0.483,
      success_attempted: 0.671,
      attempted_rate: 0.72,
      rank_buckets: {
        edges_years: [0, 2, 4],
        accuracy: [0.52, 0.66],
        counts: [40, 40],
      },
    });
    const text = target.textContent ?? "";
    expect(text).toContain("48.3%");
    expect(text).toContain("67.1%");
    expect(target.querySelectorAll("table.buckets tr")).toHaveLength(3);
  });
});
