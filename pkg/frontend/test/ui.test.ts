import { JSDOM } from "jsdom";
import { beforeEach, describe, expect, it } from "vitest";

import type { PairPayload } from "../src/api";
import { renderDoneScreen, renderPairScreen } from "../src/ui";

function payload(side: "left" | "right" = "left"): PairPayload {
  return {
    done: false,
    pair_id: "pair0001",
    left_image_id: "imgL",
    right_image_id: "imgR",
    left_image_url: "/images/imgL",
    right_image_url: "/images/imgR",
    estimate_side: side,
    index: 2,
    total: 10,
  };
}

describe("renderPairScreen", () => {
  let dom: JSDOM;
  let container: HTMLElement;

  beforeEach(() => {
    dom = new JSDOM("<main id='app'></main>", { url: "http://localhost/" });
    container = dom.window.document.getElementById("app") as HTMLElement;
  });

  it("shows both images at equal size with three actions", () => {
    const handles = renderPairScreen(dom.window.document, container, payload());
    const imgs = container.querySelectorAll("img.xray");
    expect(imgs).toHaveLength(2);
    expect((imgs[0] as HTMLImageElement).className)
      .toBe((imgs[1] as HTMLImageElement).className);
    expect(handles.notSureButton.textContent).toMatch(/not sure/i);
    expect(handles.submitButton.disabled).toBe(true);
    expect(handles.progress.textContent).toBe("Pair 3 of 10");
  });

  it("attaches the age field to the designated side", () => {
    renderPairScreen(dom.window.document, container, payload("left"));
    expect(container.querySelector(".image-left .age-field")).not.toBeNull();
    expect(container.querySelector(".image-right .age-field")).toBeNull();

    renderPairScreen(dom.window.document, container, payload("right"));
    expect(container.querySelector(".image-right .age-field")).not.toBeNull();
    expect(container.querySelector(".image-left .age-field")).toBeNull();
  });

  it("selects a side when its image is clicked", () => {
    const handles = renderPairScreen(dom.window.document, container, payload());
    handles.leftImage.click();
    expect(handles.getChoice()).toBe("left");
    expect(container.querySelector(".image-left")?.classList.contains("chosen")).toBe(true);
    handles.rightImage.click();
    expect(handles.getChoice()).toBe("right");
    handles.notSureButton.click();
    expect(handles.getChoice()).toBe("not_sure");
  });

  it("renders no age metadata anywhere in the DOM", () => {
    renderPairScreen(dom.window.document, container, payload());
    const html = container.innerHTML;
    // ground-truth keys must never reach the document
    expect(html).not.toMatch(/true_age|age_years|age_a|age_b/);
    // and no element carries numeric age data; the estimate input starts empty
    const inputs = container.querySelectorAll("input");
    expect(inputs).toHaveLength(1);
    expect((inputs[0] as HTMLInputElement).value).toBe("");
  });
});

describe("renderDoneScreen", () => {
  it("reports the response count", () => {
    const dom = new JSDOM("<main id='app'></main>", { url: "http://localhost/" });
    const container = dom.window.document.getElementById("app") as HTMLElement;
    renderDoneScreen(dom.window.document, container,
                     { done: true, responses: 10, total: 10 });
    expect(container.textContent).toMatch(/10 of 10 responses/);
  });
});
