/** Minimal admin dashboard: live response counts from the export endpoint
 * plus rendering of a report JSON produced by the analysis pipeline. It
 * computes nothing itself beyond counting rows. */

import { StudyApi } from "./api";

interface ReportBuckets {
  edges_years: number[];
  accuracy: Array<number | null>;
  counts: number[];
}

interface Report {
  n_responses: number;
  success_all: number;
  success_attempted: number | null;
  attempted_rate: number;
  rank_buckets: ReportBuckets;
}

export function parseCsv(text: string): Array<Record<string, string>> {
  const lines = text.split("\n").filter((l) => l.length > 0);
  if (lines.length === 0) return [];
  const header = lines[0].split(",");
  return lines.slice(1).map((line) => {
    const cells = line.split(",");
    const row: Record<string, string> = {};
    header.forEach((h, i) => (row[h] = cells[i] ?? ""));
    return row;
  });
}

export function sessionCounts(rows: Array<Record<string, string>>): Map<string, number> {
  const counts = new Map<string, number>();
  for (const row of rows) {
    const key = `${row.participant_id} (${row.session_id})`;
    counts.set(key, (counts.get(key) ?? 0) + 1);
  }
  return counts;
}

function pct(value: number | null): string {
  return value === null || Number.isNaN(value) ? "n/a" : `${(value * 100).toFixed(1)}%`;
}

export function renderReport(doc: Document, target: HTMLElement, report: Report): void {
  target.textContent = "";
  const summary = doc.createElement("ul");
  const items: Array<[string, string]> = [
    ["Responses", String(report.n_responses)],
    ["Success (all pairs)", pct(report.success_all)],
    ["Success (attempted)", pct(report.success_attempted)],
    ["Attempted rate", pct(report.attempted_rate)],
  ];
  for (const [label, value] of items) {
    const li = doc.createElement("li");
    li.textContent = `${label}: ${value}`;
    summary.appendChild(li);
  }
  target.appendChild(summary);

  const table = doc.createElement("table");
  table.className = "buckets";
  const head = doc.createElement("tr");
  for (const h of ["Separation (years)", "Accuracy", "Pairs"]) {
    const th = doc.createElement("th");
    th.textContent = h;
    head.appendChild(th);
  }
  table.appendChild(head);
  const b = report.rank_buckets;
  for (let i = 0; i + 1 < b.edges_years.length; i++) {
    const tr = doc.createElement("tr");
    const cells = [
      `${b.edges_years[i]}-${b.edges_years[i + 1]}`,
      pct(b.accuracy[i]),
      String(b.counts[i]),
    ];
    for (const c of cells) {
      const td = doc.createElement("td");
      td.textContent = c;
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  target.appendChild(table);
}

async function boot(): Promise<void> {
  const doc = document;
  const countsTarget = doc.getElementById("counts");
  const reportTarget = doc.getElementById("report");
  const studyInput = doc.getElementById("study-id") as HTMLInputElement | null;
  const refresh = doc.getElementById("refresh");
  const reportFile = doc.getElementById("report-file") as HTMLInputElement | null;
  if (!countsTarget || !reportTarget || !studyInput || !refresh || !reportFile) return;

  const api = new StudyApi("");
  refresh.addEventListener("click", async () => {
    countsTarget.textContent = "Loading...";
    try {
      const rows = parseCsv(await api.exportCsv(studyInput.value.trim()));
      countsTarget.textContent = "";
      const list = doc.createElement("ul");
      for (const [who, n] of sessionCounts(rows)) {
        const li = doc.createElement("li");
        li.textContent = `${who}: ${n} responses`;
        list.appendChild(li);
      }
      countsTarget.appendChild(list);
      if (rows.length === 0) countsTarget.textContent = "No responses yet.";
    } catch (err) {
      countsTarget.textContent = `Export failed: ${err}`;
    }
  });

  reportFile.addEventListener("change", async () => {
    const file = reportFile.files?.[0];
    if (!file) return;
    renderReport(doc, reportTarget, JSON.parse(await file.text()) as Report);
  });
}

if (typeof document !== "undefined" && document.getElementById("counts")) {
  boot();
}
