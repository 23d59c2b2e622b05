import { beforeEach, describe, expect, it } from "vitest";

import { renderOneHot, renderToast } from "../src/onehot.js";
import type { OneHotPayload } from "../src/types.js";
import { fixture } from "./fixtures.js";

const payload = fixture<OneHotPayload>("onehot_xgboost.json");

let container: HTMLElement;

beforeEach(() => {
  container = document.createElement("div");
  document.body.replaceChildren(container);
});

describe("renderOneHot", () => {
  it("creates one column per payload (name, value) pair", () => {
    renderOneHot(container, payload);
    const headers = [...container.querySelectorAll("th.onehot-col")].map(
      (th) => th.textContent,
    );
    expect(headers).toEqual(payload.columns.map(([n, v]) => `${n}=${v}`));
  });

  it("rotates the headers", () => {
    renderOneHot(container, payload);
    for (const th of container.querySelectorAll("th.onehot-col")) {
      expect(th.classList.contains("rotated")).toBe(true);
    }
  });

  it("marks exactly the payload's true cells", () => {
    renderOneHot(container, payload);
    const rows = container.querySelectorAll("tbody tr");
    expect(rows.length).toBe(payload.pipeline_ids.length);
    rows.forEach((tr, r) => {
      const cells = tr.querySelectorAll("td.cell");
      cells.forEach((td, c) => {
        expect(td.classList.contains("on")).toBe(payload.cells[r][c] === 1);
      });
    });
  });

  it("renders a single-setting primitive as one column", () => {
    const single: OneHotPayload = {
      schema_version: "1",
      primitive: { path: "x.primitives.f.p", name: "P", family: "f" },
      columns: [["alpha", "0.5"]],
      pipeline_ids: ["a"],
      cells: [[1]],
    };
    renderOneHot(container, single);
    expect(container.querySelectorAll("th.onehot-col").length).toBe(1);
  });

  it("shows the primitive name and family in the caption", () => {
    renderOneHot(container, payload);
    const caption = container.querySelector(".onehot-caption")!;
    expect(caption.textContent).toContain(payload.primitive.name);
    expect(caption.textContent).toContain(payload.primitive.family);
  });
});

describe("renderToast", () => {
  it("appends a toast without clearing existing content", () => {
    container.append(document.createElement("table"));
    renderToast(container, "unknown primitive");
    expect(container.querySelector(".toast")!.textContent).toBe("unknown primitive");
    expect(container.querySelector("table")).not.toBeNull();
  });
});
