/** DOM construction for the pair-comparison screen. No ground-truth age
 * ever enters this module: it renders exactly what the API payload holds. */

import type { PairPayload, DoneMarker, Choice } from "./api";
import { AGE_MAX, AGE_MIN } from "./draft";

export interface PairScreenHandles {
  root: HTMLElement;
  leftImage: HTMLImageElement;
  rightImage: HTMLImageElement;
  notSureButton: HTMLButtonElement;
  submitButton: HTMLButtonElement;
  ageInput: HTMLInputElement;
  progress: HTMLElement;
  status: HTMLElement;
  setChoice(choice: Choice | null): void;
  getChoice(): Choice | null;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

export function renderPairScreen(
  doc: Document,
  container: HTMLElement,
  payload: PairPayload,
): PairScreenHandles {
  container.textContent = "";
  let choice: Choice | null = null;

  const root = el(doc, "div", "pair-screen");
  const progress = el(
    doc,
    "div",
    "progress",
    `Pair ${payload.index + 1} of ${payload.total}`,
  );
  root.appendChild(progress);

  const prompt = el(doc, "p", "prompt",
    "Click the image showing the patient at an older age.");
  root.appendChild(prompt);

  const panel = el(doc, "div", "image-panel");
  const sides: Array<{ side: "left" | "right"; url: string }> = [
    { side: "left", url: payload.left_image_url },
    { side: "right", url: payload.right_image_url },
  ];
  const images: Record<string, HTMLImageElement> = {};
  const cells: Record<string, HTMLElement> = {};
  for (const { side, url } of sides) {
    const cell = el(doc, "div", `image-cell image-${side}`);
    const img = el(doc, "img", "xray");
    img.src = url;
    img.alt = `chest image (${side})`;
    img.draggable = false;
    cell.appendChild(img);
    panel.appendChild(cell);
    images[side] = img;
    cells[side] = cell;
  }
  root.appendChild(panel);

  // the age estimate is requested for one fixed side per pair
  const ageField = el(doc, "div", "age-field");
  const ageLabel = el(doc, "label", "", "Estimated age of this image (years): ");
  const ageInput = el(doc, "input") as HTMLInputElement;
  ageInput.type = "number";
  ageInput.min = String(AGE_MIN);
  ageInput.max = String(AGE_MAX);
  ageInput.step = "1";
  ageInput.id = "age-estimate";
  ageLabel.htmlFor = ageInput.id;
  ageField.appendChild(ageLabel);
  ageField.appendChild(ageInput);
  cells[payload.estimate_side].appendChild(ageField);

  const controls = el(doc, "div", "controls");
  const notSureButton = el(doc, "button", "not-sure", "Not sure");
  const submitButton = el(doc, "button", "submit", "Submit and continue");
  submitButton.disabled = true;
  controls.appendChild(notSureButton);
  controls.appendChild(submitButton);
  root.appendChild(controls);

  const status = el(doc, "div", "status");
  root.appendChild(status);
  container.appendChild(root);

  const setChoice = (next: Choice | null) => {
    choice = next;
    for (const side of ["left", "right"] as const) {
      cells[side].classList.toggle("chosen", choice === side);
    }
    notSureButton.classList.toggle("chosen", choice === "not_sure");
  };

  images.left.addEventListener("click", () => setChoice("left"));
  images.right.addEventListener("click", () => setChoice("right"));
  notSureButton.addEventListener("click", () => setChoice("not_sure"));

  // click-to-enlarge toggle; purely presentational
  for (const side of ["left", "right"] as const) {
    images[side].addEventListener("dblclick", () =>
      cells[side].classList.toggle("enlarged"),
    );
  }

  return {
    root,
    leftImage: images.left,
    rightImage: images.right,
    notSureButton,
    submitButton,
    ageInput,
    progress,
    status,
    setChoice,
    getChoice: () => choice,
  };
}

export function renderDoneScreen(doc: Document, container: HTMLElement,
                                 marker: DoneMarker): void {
  container.textContent = "";
  const root = el(doc, "div", "done-screen");
  root.appendChild(el(doc, "h2", "", "Study complete"));
  root.appendChild(
    el(doc, "p", "", `Thank you. ${marker.responses} of ${marker.total} responses recorded.`),
  );
  container.appendChild(root);
}

export function renderImageError(doc: Document, handles: PairScreenHandles,
                                 retry: () => void): void {
  handles.status.textContent = "An image failed to load.";
  const button = el(doc, "button", "retry", "Retry loading images");
  button.addEventListener("click", () => {
    handles.status.textContent = "";
    retry();
  });
  handles.status.appendChild(button);
}
