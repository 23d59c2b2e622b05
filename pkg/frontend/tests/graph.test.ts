import { beforeEach, describe, expect, it } from "vitest";

import { renderMergedGraph } from "../src/graph.js";
import { colorForPipeline } from "../src/glyphs.js";
import type { MergedPayload } from "../src/types.js";
import { fixture } from "./fixtures.js";

const merged3 = fixture<MergedPayload>("merged_3.json");
const merged1 = fixture<MergedPayload>("merged_1.json");

let container: HTMLElement;

beforeEach(() => {
  container = document.createElement("div");
  document.body.replaceChildren(container);
});

describe("renderMergedGraph", () => {
  it("renders every payload node and edge", () => {
    renderMergedGraph(container, merged3, merged3.pipeline_ids);
    expect(container.querySelectorAll("g.node").length).toBe(merged3.nodes.length);
    expect(container.querySelectorAll("line.edge").length).toBe(merged3.edges.length);
  });

  it("leaves nodes shared by all selected pipelines uncolored", () => {
    renderMergedGraph(container, merged3, merged3.pipeline_ids);
    for (const node of merged3.nodes) {
      const g = container.querySelector(`g[data-node-id="${node.id}"]`)!;
      const swatches = g.querySelectorAll("rect.swatch");
      if (node.provenance.length === merged3.pipeline_ids.length) {
        expect(swatches.length).toBe(0);
      } else {
        expect(swatches.length).toBe(node.provenance.length);
      }
    }
  });

  it("colors swatches by selection index, stably", () => {
    const selection = merged3.pipeline_ids;
    renderMergedGraph(container, merged3, selection);
    for (const swatch of container.querySelectorAll("rect.swatch")) {
      const pid = (swatch as SVGElement).dataset.pipelineId!;
      expect(swatch.getAttribute("fill")).toBe(colorForPipeline(selection, pid));
    }
  });

  it("a single pipeline renders as a plain DAG with no colors", () => {
    renderMergedGraph(container, merged1, merged1.pipeline_ids);
    expect(container.querySelectorAll("g.node").length).toBe(merged1.nodes.length);
    expect(container.querySelectorAll("rect.swatch").length).toBe(0);
  });

  it("joins distinct member labels on compound nodes", () => {
    renderMergedGraph(container, merged3, merged3.pipeline_ids);
    for (const node of merged3.nodes) {
      const g = container.querySelector(`g[data-node-id="${node.id}"]`)!;
      const expected = [...new Set(Object.values(node.labels))].sort().join(" | ");
      expect(g.querySelector("text")!.textContent).toBe(expected);
    }
  });

  it("supports zooming via the viewBox", () => {
    renderMergedGraph(container, merged3, merged3.pipeline_ids);
    const svg = container.querySelector("svg.merged-graph")!;
    const before = svg.getAttribute("viewBox")!;
    svg.dispatchEvent(new WheelEvent("wheel", { deltaY: 120, cancelable: true }));
    expect(svg.getAttribute("viewBox")).not.toBe(before);
  });

  it("rejects schema mismatches with a banner", () => {
    renderMergedGraph(container, { ...merged3, schema_version: "0" }, merged3.pipeline_ids);
    expect(container.querySelector(".error-banner")).not.toBeNull();
  });
});
