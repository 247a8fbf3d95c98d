/** Typed client for the study service HTTP API. */

export interface PairPayload {
  done: false;
  pair_id: string;
  left_image_id: string;
  right_image_id: string;
  left_image_url: string;
  right_image_url: string;
  estimate_side: "left" | "right";
  index: number;
  total: number;
}

export interface DoneMarker {
  done: true;
  responses: number;
  total: number;
}

export type NextPayload = PairPayload | DoneMarker;

export type Choice = "left" | "right" | "not_sure";

export interface SubmitBody {
  pair_id: string;
  choice: Choice;
  age_estimate_years?: number;
  elapsed_ms?: number;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class StudyApi {
  constructor(private baseUrl: string = "", private fetchFn: typeof fetch = fetch) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!resp.ok) {
      let detail = `${resp.status}`;
      try {
        const parsed = await resp.json();
        detail = parsed.detail ?? detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(resp.status, String(detail));
    }
    return (await resp.json()) as T;
  }

  startSession(studyId: string, participantId: string, seed?: number) {
    return this.request<{ session_id: string; total: number }>(
      "POST",
      `/studies/${encodeURIComponent(studyId)}/sessions`,
      seed === undefined
        ? { participant_id: participantId }
        : { participant_id: participantId, seed },
    );
  }

  nextPair(sessionId: string) {
    return this.request<NextPayload>("GET", `/sessions/${encodeURIComponent(sessionId)}/next`);
  }

  submitResponse(sessionId: string, body: SubmitBody) {
    return this.request<{ ok: boolean; cursor: number }>(
      "POST",
      `/sessions/${encodeURIComponent(sessionId)}/responses`,
      body,
    );
  }

  exportCsv(studyId: string): Promise<string> {
    return this.fetchFn(`${this.baseUrl}/studies/${encodeURIComponent(studyId)}/export`).then(
      (r) => {
        if (!r.ok) throw new ApiError(r.status, "export failed");
        return r.text();
      },
    );
  }
}
