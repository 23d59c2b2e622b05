import { beforeEach, describe, expect, it } from "vitest";

import { renderCpcPanel, validateK } from "../src/cpc.js";
import type { CpcPayload } from "../src/types.js";
import { fixture } from "./fixtures.js";

const payload = fixture<CpcPayload>("cpc.json");

let container: HTMLElement;

beforeEach(() => {
  container = document.createElement("div");
  document.body.replaceChildren(container);
});

describe("renderCpcPanel", () => {
  it("lists groups in the payload's order with payload values", () => {
    renderCpcPanel(container, payload, new Set(), { onHighlight: () => {} });
    const rows = [...container.querySelectorAll("tr.cpc-group")];
    expect(rows.length).toBe(payload.groups.length);
    rows.forEach((tr, i) => {
      expect((tr as HTMLElement).dataset.members).toBe(payload.groups[i].members.join(","));
      expect(tr.children[1].textContent).toBe(payload.groups[i].correlation.toFixed(4));
      expect(tr.children[2].textContent).toBe(String(payload.groups[i].n_joint_usage));
    });
  });

  it("reports the evaluated-subset counter", () => {
    renderCpcPanel(container, payload, new Set(), { onHighlight: () => {} });
    expect(container.querySelector(".cpc-summary")!.textContent).toContain(
      String(payload.subsets_evaluated),
    );
  });

  it("clicking a group row requests its members as highlight", () => {
    let got: string[] | null = null;
    renderCpcPanel(container, payload, new Set(), { onHighlight: (m) => (got = m) });
    (container.querySelector("tr.cpc-group") as HTMLElement).click();
    expect(got).toEqual(payload.groups[0].members);
  });

  it("a second click on the active row clears the highlight", () => {
    let got: string[] | null = null;
    renderCpcPanel(container, payload, new Set(payload.groups[0].members), {
      onHighlight: (m) => (got = m),
    });
    const row = container.querySelector("tr.cpc-group") as HTMLElement;
    expect(row.classList.contains("active")).toBe(true);
    row.click();
    expect(got).toEqual([]);
  });

  it("shows an empty-state message when no groups dominate", () => {
    renderCpcPanel(container, { ...payload, groups: [] }, new Set(), {
      onHighlight: () => {},
    });
    expect(container.querySelector(".empty-state")).not.toBeNull();
    expect(container.querySelector("table.cpc-groups")).toBeNull();
  });

  it("rejects schema mismatches with a banner", () => {
    renderCpcPanel(container, { ...payload, schema_version: "2" }, new Set(), {
      onHighlight: () => {},
    });
    expect(container.querySelector(".error-banner")).not.toBeNull();
  });
});

describe("validateK", () => {
  it("accepts integers >= 2 and rejects the rest", () => {
    expect(validateK(2)).toBeNull();
    expect(validateK(5)).toBeNull();
    expect(validateK(1)).not.toBeNull();
    expect(validateK(2.5)).not.toBeNull();
    expect(validateK(Number.NaN)).not.toBeNull();
  });
});
