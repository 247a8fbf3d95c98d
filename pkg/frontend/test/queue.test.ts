import { describe, expect, it } from "vitest";

import { StudyApi } from "../src/api";
import { SubmitQueue } from "../src/queue";

type FetchLike = typeof fetch;

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

/** Server double with the same duplicate-rejection behavior as the real one. */
function fakeServer() {
  const recorded: Array<{ pair_id: string }> = [];
  const seen = new Set<string>();
  const handler: FetchLike = async (url, init) => {
    const body = JSON.parse(String(init?.body ?? "{}"));
    if (String(url).endsWith("/responses")) {
      if (seen.has(body.pair_id)) {
        return jsonResponse(409, { detail: "already answered" });
      }
      seen.add(body.pair_id);
      recorded.push(body);
      return jsonResponse(200, { ok: true, cursor: recorded.length });
    }
    return jsonResponse(404, { detail: "nope" });
  };
  return { recorded, handler };
}

const instantSleep = () => Promise.resolve();

describe("SubmitQueue", () => {
  it("delivers once on the happy path", async () => {
    const server = fakeServer();
    const api = new StudyApi("http://x", server.handler);
    const queue = new SubmitQueue(api, "s1", 5, 0, instantSleep);
    const outcome = await queue.submit({ pair_id: "p1", choice: "left" });
    expect(outcome).toEqual({ delivered: true, deduplicated: false, attempts: 1 });
    expect(server.recorded).toHaveLength(1);
  });

  it("retries transient network failures until delivered", async () => {
    const server = fakeServer();
    let failures = 3;
    const flaky: FetchLike = async (url, init) => {
      if (failures > 0) {
        failures -= 1;
        throw new TypeError("network down");
      }
      return server.handler(url, init);
    };
    const queue = new SubmitQueue(new StudyApi("http://x", flaky), "s1", 8, 0,
                                  instantSleep);
    const outcome = await queue.submit({ pair_id: "p1", choice: "right" });
    expect(outcome.delivered).toBe(true);
    expect(outcome.attempts).toBe(4);
    expect(server.recorded).toHaveLength(1);
  });

  it("persists exactly once when the ack is lost", async () => {
    // the server processes the request but the response never arrives;
    // the retry hits duplicate rejection and is treated as delivered
    const server = fakeServer();
    let dropNextAck = true;
    const lossy: FetchLike = async (url, init) => {
      const resp = await server.handler(url, init);
      if (dropNextAck && resp.status === 200) {
        dropNextAck = false;
        throw new TypeError("connection reset before response");
      }
      return resp;
    };
    const queue = new SubmitQueue(new StudyApi("http://x", lossy), "s1", 8, 0,
                                  instantSleep);
    const outcome = await queue.submit({ pair_id: "p1", choice: "not_sure" });
    expect(outcome).toEqual({ delivered: true, deduplicated: true, attempts: 2 });
    expect(server.recorded).toHaveLength(1); // exactly once
  });

  it("keeps the draft after exhausting attempts and flushes later", async () => {
    const server = fakeServer();
    let online = false;
    const offline: FetchLike = async (url, init) => {
      if (!online) throw new TypeError("offline");
      return server.handler(url, init);
    };
    const queue = new SubmitQueue(new StudyApi("http://x", offline), "s1", 2, 0,
                                  instantSleep);
    await expect(queue.submit({ pair_id: "p9", choice: "left" })).rejects.toThrow();
    expect(queue.hasPending()).toBe(true);
    online = true;
    const outcome = await queue.flush();
    expect(outcome?.delivered).toBe(true);
    expect(server.recorded).toHaveLength(1);
    expect(queue.hasPending()).toBe(false);
  });

  it("does not retry validation errors", async () => {
    const rejecting: FetchLike = async () => jsonResponse(422, { detail: "bad" });
    const queue = new SubmitQueue(new StudyApi("http://x", rejecting), "s1", 5, 0,
                                  instantSleep);
    await expect(queue.submit({ pair_id: "p1", choice: "left" })).rejects.toThrow();
    expect(queue.hasPending()).toBe(false);
  });
});
