/** Combined-contribution panel: group table sorted by the service, with
 * highlight-on-click that outlines the member columns in the matrix. */

import { SUPPORTED_SCHEMA, type CpcPayload } from "./types.js";
import { schemaBanner } from "./matrix.js";

export interface CpcHandlers {
  onHighlight(members: string[]): void;
}

export function validateK(k: number): string | null {
  return Number.isInteger(k) && k >= 2 ? null : "k must be an integer >= 2";
}

export function renderCpcPanel(
  container: HTMLElement,
  payload: CpcPayload,
  highlight: Set<string>,
  handlers: CpcHandlers,
): void {
  container.replaceChildren();
  if (payload.schema_version !== SUPPORTED_SCHEMA) {
    container.append(schemaBanner(payload.schema_version));
    return;
  }

  const summary = document.createElement("div");
  summary.className = "cpc-summary";
  summary.textContent =
    `${payload.metric}, k=${payload.k}, ` +
    `${payload.subsets_evaluated} subsets evaluated`;
  container.append(summary);

  if (payload.groups.length === 0) {
    const empty = document.createElement("div");
    empty.className = "empty-state";
    empty.textContent = "no dominant primitive groups";
    container.append(empty);
    return;
  }

  const table = document.createElement("table");
  table.className = "cpc-groups";
  const head = table.createTHead().insertRow();
  for (const title of ["members", "correlation", "joint usage"]) {
    const th = document.createElement("th");
    th.textContent = title;
    head.append(th);
  }

  const body = table.createTBody();
  for (const group of payload.groups) {
    const tr = body.insertRow();
    tr.className = "cpc-group";
    const active = group.members.every((m) => highlight.has(m)) && highlight.size === group.members.length;
    if (active) tr.classList.add("active");
    tr.dataset.members = group.members.join(",");
    tr.insertCell().textContent = group.members.map((m) => m.split(".").slice(2).join(".")).join(" + ");
    tr.insertCell().textContent = group.correlation.toFixed(4);
    tr.insertCell().textContent = String(group.n_joint_usage);
    // second click on the active row clears the highlight
    tr.addEventListener("click", () => handlers.onHighlight(active ? [] : group.members));
  }
  container.append(table);
}
