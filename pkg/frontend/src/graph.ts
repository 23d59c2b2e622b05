/** Node-link view of a merged-graph payload. Nodes shared by every selected
 * pipeline stay uncolored; partial-provenance nodes carry one color swatch per
 * contributing pipeline, with colors assigned by selection index. */

import { colorForPipeline } from "./glyphs.js";
import { SUPPORTED_SCHEMA, type MergedPayload } from "./types.js";
import { schemaBanner } from "./matrix.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const NODE_W = 150;
const NODE_H = 46;
const GAP_X = 60;
const GAP_Y = 24;

interface Placed {
  x: number;
  y: number;
}

/** Longest-path layering; payload nodes arrive in topological order. */
function layout(payload: MergedPayload): Map<string, Placed> {
  const depth = new Map<string, number>();
  for (const node of payload.nodes) depth.set(node.id, 0);
  for (const edge of payload.edges) {
    const d = Math.max(depth.get(edge.to) ?? 0, (depth.get(edge.from) ?? 0) + 1);
    depth.set(edge.to, d);
  }
  const perLayer = new Map<number, number>();
  const placed = new Map<string, Placed>();
  for (const node of payload.nodes) {
    const d = depth.get(node.id) ?? 0;
    const slot = perLayer.get(d) ?? 0;
    perLayer.set(d, slot + 1);
    placed.set(node.id, {
      x: d * (NODE_W + GAP_X),
      y: slot * (NODE_H + GAP_Y),
    });
  }
  return placed;
}

function nodeLabel(labels: Record<string, string>): string {
  return [...new Set(Object.values(labels))].sort().join(" | ");
}

export function renderMergedGraph(
  container: HTMLElement,
  payload: MergedPayload,
  selection: string[],
): void {
  container.replaceChildren();
  if (payload.schema_version !== SUPPORTED_SCHEMA) {
    container.append(schemaBanner(payload.schema_version));
    return;
  }

  const placed = layout(payload);
  const width = Math.max(...[...placed.values()].map((p) => p.x)) + NODE_W + GAP_X;
  const height = Math.max(...[...placed.values()].map((p) => p.y)) + NODE_H + GAP_Y;

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.classList.add("merged-graph");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  attachPanZoom(svg, width, height);

  for (const edge of payload.edges) {
    const a = placed.get(edge.from)!;
    const b = placed.get(edge.to)!;
    const line = document.createElementNS(SVG_NS, "line");
    line.classList.add("edge");
    line.setAttribute("x1", String(a.x + NODE_W));
    line.setAttribute("y1", String(a.y + NODE_H / 2));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y + NODE_H / 2));
    svg.append(line);
  }

  const everyone = payload.pipeline_ids.length;
  for (const node of payload.nodes) {
    const pos = placed.get(node.id)!;
    const g = document.createElementNS(SVG_NS, "g");
    g.classList.add("node");
    g.dataset.nodeId = node.id;
    g.dataset.family = node.family;

    const box = document.createElementNS(SVG_NS, "rect");
    box.setAttribute("x", String(pos.x));
    box.setAttribute("y", String(pos.y));
    box.setAttribute("width", String(NODE_W));
    box.setAttribute("height", String(NODE_H));
    g.append(box);

    // shared nodes carry no color; partial nodes get per-pipeline swatches
    if (node.provenance.length < everyone) {
      const swatchW = NODE_W / node.provenance.length;
      node.provenance.forEach((pid, i) => {
        const swatch = document.createElementNS(SVG_NS, "rect");
        swatch.classList.add("swatch");
        swatch.dataset.pipelineId = pid;
        swatch.setAttribute("x", String(pos.x + i * swatchW));
        swatch.setAttribute("y", String(pos.y));
        swatch.setAttribute("width", String(swatchW));
        swatch.setAttribute("height", "8");
        swatch.setAttribute("fill", colorForPipeline(selection, pid));
        g.append(swatch);
      });
    }

    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(pos.x + NODE_W / 2));
    text.setAttribute("y", String(pos.y + NODE_H / 2 + 8));
    text.setAttribute("text-anchor", "middle");
    text.textContent = nodeLabel(node.labels);
    g.append(text);

    svg.append(g);
  }

  container.append(svg);
}

function attachPanZoom(svg: SVGSVGElement, width: number, height: number): void {
  const view = { x: 0, y: 0, w: width, h: height };
  const apply = () => svg.setAttribute("viewBox", `${view.x} ${view.y} ${view.w} ${view.h}`);

  svg.addEventListener("wheel", (ev: WheelEvent) => {
    ev.preventDefault();
    const factor = ev.deltaY > 0 ? 1.15 : 1 / 1.15;
    view.w *= factor;
    view.h *= factor;
    apply();
  });

  let drag: { x: number; y: number } | null = null;
  svg.addEventListener("pointerdown", (ev: PointerEvent) => {
    drag = { x: ev.clientX, y: ev.clientY };
  });
  svg.addEventListener("pointermove", (ev: PointerEvent) => {
    if (!drag) return;
    view.x -= ((ev.clientX - drag.x) / Math.max(svg.clientWidth, 1)) * view.w;
    view.y -= ((ev.clientY - drag.y) / Math.max(svg.clientHeight, 1)) * view.h;
    drag = { x: ev.clientX, y: ev.clientY };
    apply();
  });
  svg.addEventListener("pointerup", () => {
    drag = null;
  });
}
