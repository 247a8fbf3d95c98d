/**
 * End-to-end: the real client modules drive the real study service.
 *
 * The test generates a small phantom dataset, creates a 10-pair study,
 * serves it with the actual backend, and completes a session through the
 * DOM (jsdom) using the production SessionController. It then verifies
 * persistence, exactly-once delivery under a lost ack, and blinding of
 * every network payload and DOM snapshot.
 */

import { spawn, spawnSync, ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { JSDOM } from "jsdom";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { StudyApi } from "../src/api";
import { SessionController, joinStudy } from "../src/session";

const PYTHON = process.env.AGEX_PYTHON ?? "python3";
const PORT = 18000 + Math.floor(Math.random() * 10000);
const BASE = `http://127.0.0.1:${PORT}`;
const STUDY_ID = "ui-e2e";

let dataDir: string;
let server: ChildProcess | null = null;
const networkLog: string[] = [];

function cli(...args: string[]): void {
  const proc = spawnSync(PYTHON, ["-m", "agex.cli", ...args],
                         { encoding: "utf-8", cwd: join(__dirname, "..", "..") });
  if (proc.status !== 0) {
    throw new Error(`agex ${args[0]} failed: ${proc.stderr}`);
  }
}

/** fetch wrapper recording every payload the participant's browser sees. */
const loggingFetch: typeof fetch = async (url, init) => {
  const resp = await fetch(url, init);
  const copy = resp.clone();
  const contentType = copy.headers.get("content-type") ?? "";
  if (contentType.includes("json")) {
    networkLog.push(await copy.text());
  }
  return resp;
};

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 120; i++) {
    try {
      const r = await fetch(`${BASE}/studies/${STUDY_ID}/export`);
      if (r.status === 200) return;
    } catch {
      /* not up yet */
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error("study service did not come up");
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "agex-e2e-"));
  cli("gen-data", "--n-patients", "60", "--out", dataDir, "--seed", "5",
      "--resolution", "32", "--multi-scan-fraction", "1.0");
  cli("make-study", "--data", dataDir, "--pairs-per-bucket", "5",
      "--n-buckets", "2", "--seed", "1", "--study-id", STUDY_ID);
  server = spawn(PYTHON, ["-m", "agex.cli", "serve-study", "--data", dataDir,
                          "--port", String(PORT)],
                 { stdio: "ignore", cwd: join(__dirname, "..", "..") });
  await waitForServer();
}, 120_000);

afterAll(() => {
  server?.kill("SIGKILL");
  rmSync(dataDir, { recursive: true, force: true });
});

/** Answer the currently rendered pair, alternating choices. */
function autoAnswer(doc: Document, k: number): boolean {
  const submit = doc.querySelector("button.submit") as HTMLButtonElement | null;
  if (!submit) return false;
  const win = doc.defaultView as unknown as Window & typeof globalThis;
  const sides = ["left", "right", "not_sure"] as const;
  const choice = sides[k % 3];
  if (choice === "not_sure") {
    (doc.querySelector("button.not-sure") as HTMLButtonElement).click();
  } else {
    (doc.querySelector(`.image-${choice} img`) as HTMLImageElement).click();
    const age = doc.getElementById("age-estimate") as HTMLInputElement;
    age.value = String(40 + k);
    age.dispatchEvent(new win.Event("input", { bubbles: true }));
  }
  if (submit.disabled) return false;
  submit.click();
  return true;
}

describe("scripted browser session", () => {
  it("completes a 10-pair study with exactly 10 persisted responses",
     async () => {
    const dom = new JSDOM("<main id='app'></main>", { url: `${BASE}/` });
    const doc = dom.window.document;
    const container = doc.getElementById("app") as HTMLElement;

    const api = new StudyApi(BASE, loggingFetch);
    const sessionId = await joinStudy(api, STUDY_ID, "e2e-tester",
                                      dom.window.localStorage);
    // reload resumes the same session instead of opening another
    expect(await joinStudy(api, STUDY_ID, "e2e-tester", dom.window.localStorage))
      .toBe(sessionId);

    const controller = new SessionController({ api, sessionId, container, doc });
    const done = controller.run();

    const domSnapshots: string[] = [];
    let answered = 0;
    while (answered < 10) {
      await new Promise((r) => setTimeout(r, 25));
      domSnapshots.push(container.innerHTML);
      if (autoAnswer(doc, answered)) answered += 1;
    }
    const responses = await done;
    expect(responses).toBe(10);
    expect(container.textContent).toMatch(/Study complete/);

    // exactly 10 rows persisted server-side
    const csv = await api.exportCsv(STUDY_ID);
    const rows = csv.trim().split("\n").slice(1)
      .filter((line) => line.includes(sessionId));
    expect(rows).toHaveLength(10);

    // blinding: no ground-truth age in any network payload or DOM snapshot
    for (const payload of networkLog) {
      expect(payload).not.toMatch(/true_age/);
      expect(payload).not.toMatch(/"age_years"/);
    }
    for (const snapshot of domSnapshots) {
      expect(snapshot).not.toMatch(/true_age|age_years/);
    }
  }, 120_000);

  it("persists exactly once when an ack is lost mid-session", async () => {
    const dom = new JSDOM("<main id='app'></main>", { url: `${BASE}/` });
    const doc = dom.window.document;
    const container = doc.getElementById("app") as HTMLElement;

    let dropNextResponseAck = false;
    const lossyFetch: typeof fetch = async (url, init) => {
      const resp = await fetch(url, init);
      if (dropNextResponseAck && String(url).endsWith("/responses") &&
          resp.status === 200) {
        dropNextResponseAck = false;
        throw new TypeError("connection reset before response");
      }
      return resp;
    };

    const api = new StudyApi(BASE, lossyFetch);
    const started = await api.startSession(STUDY_ID, "lossy-tester", 42);
    const controller = new SessionController({
      api, sessionId: started.session_id, container, doc,
    });
    const done = controller.run();

    let answered = 0;
    while (answered < 10) {
      await new Promise((r) => setTimeout(r, 25));
      if (answered === 3) dropNextResponseAck = true; // lose one ack mid-run
      if (autoAnswer(doc, answered)) answered += 1;
    }
    expect(await done).toBe(10);

    const csv = await api.exportCsv(STUDY_ID);
    const rows = csv.trim().split("\n").slice(1)
      .filter((line) => line.includes(started.session_id));
    expect(rows).toHaveLength(10); // the dropped-ack pair is not duplicated
    const pairIds = rows.map((r) => r.split(",")[2]);
    expect(new Set(pairIds).size).toBe(10);
  }, 120_000);
});
