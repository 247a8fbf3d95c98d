/** Participant entry point: ?study=ID&participant=NAME joins (or resumes)
 * a session and walks the pairs. */

import { StudyApi } from "./api";
import { joinStudy, SessionController } from "./session";

async function boot(): Promise<void> {
  const container = document.getElementById("app");
  if (!container) throw new Error("missing #app container");

  const params = new URLSearchParams(window.location.search);
  const studyId = params.get("study");
  let participantId = params.get("participant");
  if (!studyId) {
    container.textContent = "Add ?study=STUDY_ID to the URL to begin.";
    return;
  }
  while (!participantId) {
    participantId = window.prompt("Participant id:");
  }

  const api = new StudyApi("");
  const sessionId = await joinStudy(api, studyId, participantId, window.localStorage);
  const controller = new SessionController({
    api,
    sessionId,
    container,
    doc: document,
  });
  await controller.run();
}

boot().catch((err) => {
  const container = document.getElementById("app");
  if (container) container.textContent = `Failed to start: ${err}`;
  console.error(err);
});
