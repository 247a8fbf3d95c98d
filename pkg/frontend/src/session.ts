/** Session orchestration: fetch pair, collect a draft, submit exactly once,
 * advance. The server cursor is the source of truth; on any disagreement
 * (conflict) the client resynchronizes by refetching the next pair. */

import { ApiError, StudyApi, PairPayload } from "./api";
import { canSubmit, draftToBody, ResponseDraft } from "./draft";
import { SubmitQueue } from "./queue";
import { renderDoneScreen, renderImageError, renderPairScreen } from "./ui";

export interface SessionOptions {
  api: StudyApi;
  sessionId: string;
  container: HTMLElement;
  doc: Document;
  now?: () => number;
}

export class SessionController {
  private queue: SubmitQueue;
  private now: () => number;

  constructor(private opts: SessionOptions) {
    this.queue = new SubmitQueue(opts.api, opts.sessionId);
    this.now = opts.now ?? (() => Date.now());
  }

  /** Run until the session is exhausted. Resolves with responses count. */
  async run(): Promise<number> {
    for (;;) {
      await this.queue.flush(); // deliver anything left from a failed step
      const payload = await this.opts.api.nextPair(this.opts.sessionId);
      if (payload.done) {
        renderDoneScreen(this.opts.doc, this.opts.container, payload);
        return payload.responses;
      }
      await this.presentAndSubmit(payload);
    }
  }

  private presentAndSubmit(payload: PairPayload): Promise<void> {
    return new Promise((resolve, reject) => {
      const handles = renderPairScreen(this.opts.doc, this.opts.container, payload);
      const shownAt = this.now();

      const currentDraft = (): ResponseDraft => ({
        choice: handles.getChoice(),
        ageText: handles.ageInput.value,
      });

      const refreshGate = () => {
        handles.submitButton.disabled = !canSubmit(currentDraft());
      };
      handles.leftImage.addEventListener("click", refreshGate);
      handles.rightImage.addEventListener("click", refreshGate);
      handles.notSureButton.addEventListener("click", refreshGate);
      handles.ageInput.addEventListener("input", refreshGate);

      for (const img of [handles.leftImage, handles.rightImage]) {
        img.addEventListener("error", () =>
          renderImageError(this.opts.doc, handles, () => {
            // retry by re-requesting both images; no silent skip
            handles.leftImage.src = payload.left_image_url;
            handles.rightImage.src = payload.right_image_url;
          }),
        );
      }

      const keyHandler = (ev: KeyboardEvent) => {
        if (ev.key === "ArrowLeft") handles.setChoice("left");
        else if (ev.key === "ArrowRight") handles.setChoice("right");
        else if (ev.key === "u") handles.setChoice("not_sure");
        else return;
        refreshGate();
      };
      this.opts.doc.addEventListener("keydown", keyHandler);

      handles.submitButton.addEventListener("click", async () => {
        const draft = currentDraft();
        if (!canSubmit(draft)) return;
        handles.submitButton.disabled = true;
        handles.status.textContent = "Submitting...";
        try {
          const body = draftToBody(draft, payload.pair_id, this.now() - shownAt);
          await this.queue.submit(body);
          this.opts.doc.removeEventListener("keydown", keyHandler);
          resolve();
        } catch (err) {
          if (err instanceof ApiError && err.status === 409) {
            // cursor drift: the server moved on; resynchronize
            this.opts.doc.removeEventListener("keydown", keyHandler);
            resolve();
            return;
          }
          handles.status.textContent =
            "Could not submit; your answer is kept and will be retried.";
          handles.submitButton.disabled = false;
          if (!(err instanceof ApiError)) {
            // transient network problem: allow another manual attempt
            return;
          }
          reject(err);
        }
      });
    });
  }
}

export async function joinStudy(api: StudyApi, studyId: string, participantId: string,
                                storage: Storage): Promise<string> {
  // one active session per browser (per study): reuse across reloads
  const key = `agex-session:${studyId}:${participantId}`;
  const existing = storage.getItem(key);
  if (existing) return existing;
  const started = await api.startSession(studyId, participantId);
  storage.setItem(key, started.session_id);
  return started.session_id;
}
