/** Pipeline x primitive matrix view: family-shaped glyph grid with aligned
 * metric bars (rows) and contribution bars (columns). Every rendered number
 * comes straight from the payload; the view computes nothing. */

import { shapeByFamily } from "./glyphs.js";
import { SUPPORTED_SCHEMA, type MatrixPayload, type ViewState } from "./types.js";

export interface MatrixHandlers {
  onColumnClick?(path: string): void;
  onRowClick?(pipelineId: string): void;
}

/** Rows above which only selected and boundary rows render eagerly. */
export const VIRTUAL_ROW_LIMIT = 200;

export function schemaBanner(found: string): HTMLElement {
  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.textContent = `payload schema ${found} != supported ${SUPPORTED_SCHEMA}`;
  return banner;
}

function formatValue(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toFixed(4);
}

function tooltipFor(payload: MatrixPayload, path: string, family: string): string {
  const entry = payload.contributions[path];
  const contribution = entry && entry.value !== null ? formatValue(entry.value) : "undefined";
  return [
    path,
    `family: ${family}`,
    `contribution (${payload.metric.name}): ${contribution}`,
    `used by ${entry ? entry.n1 : 0} of ${payload.pipeline_ids.length} pipelines`,
  ].join("\n");
}

export function renderMatrix(
  container: HTMLElement,
  payload: MatrixPayload,
  state: ViewState,
  handlers: MatrixHandlers = {},
): void {
  container.replaceChildren();
  if (payload.schema_version !== SUPPORTED_SCHEMA) {
    container.append(schemaBanner(payload.schema_version));
    return;
  }

  const shapes = shapeByFamily(payload.families);
  const boundaries = new Set(state.sort.cols === "family" ? payload.family_boundaries : []);
  const metricPeak = Math.max(...payload.metric.values.map(Math.abs), 1e-12);
  const contribValues = payload.primitive_paths.map((p) => payload.contributions[p]?.value ?? 0);
  const contribPeak = Math.max(...contribValues.map(Math.abs), 1e-12);

  const table = document.createElement("table");
  table.className = "matrix";

  const head = table.createTHead().insertRow();
  head.append(document.createElement("th"));
  payload.column_order.forEach((col, position) => {
    const path = payload.primitive_paths[col];
    const th = document.createElement("th");
    th.className = "primitive-col";
    if (boundaries.has(position)) th.classList.add("family-boundary");
    if (state.highlight.has(path)) th.classList.add("highlighted");
    if (state.expandedPrimitive === path) th.classList.add("expanded");
    th.dataset.path = path;
    th.dataset.family = payload.families[col];
    th.textContent = path.split(".").slice(2).join(".");
    th.title = tooltipFor(payload, path, payload.families[col]);
    th.addEventListener("click", () => handlers.onColumnClick?.(path));
    head.append(th);
  });
  const metricHead = document.createElement("th");
  metricHead.className = "metric-head";
  metricHead.textContent = `${payload.metric.name} (${payload.metric.direction})`;
  head.append(metricHead);

  const body = table.createTBody();
  const virtual = payload.row_order.length > VIRTUAL_ROW_LIMIT;
  for (const row of payload.row_order) {
    const pid = payload.pipeline_ids[row];
    if (virtual && !state.selectedRows.includes(pid)) continue;
    const tr = body.insertRow();
    tr.dataset.pipelineId = pid;
    if (state.selectedRows.includes(pid)) tr.classList.add("selected");

    const label = document.createElement("th");
    label.className = "pipeline-row";
    label.textContent = `${pid} [${payload.sources[row]}]`;
    label.addEventListener("click", () => handlers.onRowClick?.(pid));
    tr.append(label);

    payload.column_order.forEach((col, position) => {
      const td = tr.insertCell();
      td.className = "cell";
      if (boundaries.has(position)) td.classList.add("family-boundary");
      if (state.highlight.has(payload.primitive_paths[col])) td.classList.add("highlighted");
      if (payload.cells[row][col]) {
        const glyph = document.createElement("span");
        glyph.className = `glyph shape-${shapes.get(payload.families[col])}`;
        td.append(glyph);
      }
    });

    const metricCell = tr.insertCell();
    metricCell.className = "metric-cell";
    const bar = document.createElement("div");
    bar.className = "metric-bar";
    const value = payload.metric.values[row];
    bar.style.width = `${(Math.abs(value) / metricPeak) * 100}%`;
    bar.dataset.value = formatValue(value);
    metricCell.append(bar, document.createTextNode(formatValue(value)));
  }

  const foot = table.createTFoot().insertRow();
  foot.className = "contribution-row";
  const footLabel = document.createElement("th");
  footLabel.textContent = "contribution";
  foot.append(footLabel);
  payload.column_order.forEach((col, position) => {
    const path = payload.primitive_paths[col];
    const td = foot.insertCell();
    td.className = "contrib-cell";
    if (boundaries.has(position)) td.classList.add("family-boundary");
    const entry = payload.contributions[path];
    const bar = document.createElement("div");
    if (!entry || entry.value === null) {
      bar.className = "contrib-bar undefined";
      bar.dataset.value = "undefined";
    } else {
      bar.className = entry.value < 0 ? "contrib-bar negative" : "contrib-bar positive";
      bar.style.height = `${(Math.abs(entry.value) / contribPeak) * 100}%`;
      bar.dataset.value = formatValue(entry.value);
    }
    td.append(bar);
  });
  foot.insertCell();

  container.append(table);
}
