/** Response draft state and its submit-gating rules. */

import type { Choice } from "./api";

export interface ResponseDraft {
  choice: Choice | null;
  ageText: string; // raw text field contents
}

export const AGE_MIN = 0;
export const AGE_MAX = 105;

/** Integer years in [0, 105], or null when the text is not acceptable. */
export function parseAge(text: string): number | null {
  const trimmed = text.trim();
  if (!/^\d+$/.test(trimmed)) return null;
  const value = Number(trimmed);
  return value >= AGE_MIN && value <= AGE_MAX ? value : null;
}

/**
 * A draft may be submitted when a choice is made and, for a definite
 * older/younger choice, the age estimate is a valid integer. A not-sure
 * response may go out without an estimate.
 */
export function canSubmit(draft: ResponseDraft): boolean {
  if (draft.choice === null) return false;
  if (draft.choice === "not_sure") {
    return draft.ageText.trim() === "" || parseAge(draft.ageText) !== null;
  }
  return parseAge(draft.ageText) !== null;
}

export function draftToBody(draft: ResponseDraft, pairId: string, elapsedMs: number) {
  if (!canSubmit(draft) || draft.choice === null) {
    throw new Error("draft is not submittable");
  }
  const age = parseAge(draft.ageText);
  return {
    pair_id: pairId,
    choice: draft.choice,
    ...(age === null ? {} : { age_estimate_years: age }),
    elapsed_ms: Math.max(0, Math.round(elapsedMs)),
  };
}
