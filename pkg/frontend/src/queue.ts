/**
 * Exactly-once submission against an at-least-once network.
 *
 * A pending response survives transient failures (kept and retried); a
 * 409 conflict means the server already has it (duplicate of a submission
 * whose ack was lost), so it is treated as delivered and the session
 * cursor is resynchronized from the server.
 */

import { ApiError, StudyApi, SubmitBody } from "./api";

export interface SubmitOutcome {
  delivered: boolean;
  deduplicated: boolean;
  attempts: number;
}

export class SubmitQueue {
  private pending: SubmitBody | null = null;

  constructor(
    private api: StudyApi,
    private sessionId: string,
    private maxAttempts = 8,
    private backoffMs = 50,
    private sleep: (ms: number) => Promise<void> = (ms) =>
      new Promise((r) => setTimeout(r, ms)),
  ) {}

  hasPending(): boolean {
    return this.pending !== null;
  }

  /** Deliver one response, retrying transient failures until acknowledged. */
  async submit(body: SubmitBody): Promise<SubmitOutcome> {
    this.pending = body;
    let attempts = 0;
    for (;;) {
      attempts += 1;
      try {
        await this.api.submitResponse(this.sessionId, body);
        this.pending = null;
        return { delivered: true, deduplicated: false, attempts };
      } catch (err) {
        if (err instanceof ApiError && err.status === 409) {
          // server already holds this pair's response: delivered earlier
          this.pending = null;
          return { delivered: true, deduplicated: true, attempts };
        }
        if (err instanceof ApiError && err.status >= 400 && err.status < 500) {
          this.pending = null;
          throw err; // validation problem, retrying would not help
        }
        if (attempts >= this.maxAttempts) {
          throw err; // kept in `pending`; caller may retry later
        }
        await this.sleep(this.backoffMs * attempts);
      }
    }
  }

  /** Retry whatever is still pending (e.g. after connectivity returns). */
  async flush(): Promise<SubmitOutcome | null> {
    if (this.pending === null) return null;
    return this.submit(this.pending);
  }
}
