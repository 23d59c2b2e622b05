/** Inline one-hot sub-view for a selected primitive column: one column per
 * observed (hyperparameter, value) pair, rotated headers. */

import { SUPPORTED_SCHEMA, type OneHotPayload } from "./types.js";
import { schemaBanner } from "./matrix.js";

export function renderOneHot(container: HTMLElement, payload: OneHotPayload): void {
  container.replaceChildren();
  if (payload.schema_version !== SUPPORTED_SCHEMA) {
    container.append(schemaBanner(payload.schema_version));
    return;
  }

  const caption = document.createElement("div");
  caption.className = "onehot-caption";
  caption.textContent = `${payload.primitive.name} (${payload.primitive.family})`;

  const table = document.createElement("table");
  table.className = "onehot";
  const head = table.createTHead().insertRow();
  head.append(document.createElement("th"));
  for (const [name, value] of payload.columns) {
    const th = document.createElement("th");
    th.className = "onehot-col rotated";
    th.textContent = `${name}=${value}`;
    head.append(th);
  }

  const body = table.createTBody();
  payload.pipeline_ids.forEach((pid, row) => {
    const tr = body.insertRow();
    tr.dataset.pipelineId = pid;
    const label = document.createElement("th");
    label.textContent = pid;
    tr.append(label);
    payload.columns.forEach((_, col) => {
      const td = tr.insertCell();
      td.className = payload.cells[row][col] ? "cell on" : "cell";
    });
  });

  container.append(caption, table);
}

export function renderToast(container: HTMLElement, message: string): void {
  const toast = document.createElement("div");
  toast.className = "toast";
  toast.textContent = message;
  container.append(toast);
}
