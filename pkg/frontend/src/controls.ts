/** Menu bar: sort selectors, CPC parameters, subset and export actions. */

import type { ViewState } from "./types.js";

export interface ControlHandlers {
  onSortChange(rows: string, cols: string): void;
  onKeepSelected(): void;
  onCompareSelected(): void;
  onCpcRun(k: number): void;
  exportUrl(): string;
}

const ROW_SORTS = ["metric", "id", "source_grouped"];
const COL_SORTS = ["family", "contribution", "usage_count"];

function select(name: string, options: string[], current: string): HTMLSelectElement {
  const el = document.createElement("select");
  el.name = name;
  for (const option of options) {
    const item = document.createElement("option");
    item.value = option;
    item.textContent = option;
    item.selected = option === current;
    el.append(item);
  }
  return el;
}

export function renderControls(
  container: HTMLElement,
  state: ViewState,
  handlers: ControlHandlers,
): void {
  container.replaceChildren();

  const rows = select("rows", ROW_SORTS, state.sort.rows);
  const cols = select("cols", COL_SORTS, state.sort.cols);
  const onSort = () => handlers.onSortChange(rows.value, cols.value);
  rows.addEventListener("change", onSort);
  cols.addEventListener("change", onSort);

  const keep = document.createElement("button");
  keep.className = "keep-selected";
  keep.textContent = `Keep selected (${state.selectedRows.length})`;
  keep.disabled = state.selectedRows.length === 0;
  keep.addEventListener("click", () => handlers.onKeepSelected());

  const compare = document.createElement("button");
  compare.className = "compare-selected";
  compare.textContent = "Compare selected";
  compare.disabled = state.selectedRows.length === 0;
  compare.addEventListener("click", () => handlers.onCompareSelected());

  const kInput = document.createElement("input");
  kInput.type = "number";
  kInput.name = "cpc-k";
  kInput.min = "2";
  kInput.value = String(state.cpcK);

  const kError = document.createElement("span");
  kError.className = "k-error";

  const run = document.createElement("button");
  run.className = "run-cpc";
  run.textContent = "Run CPC";
  run.addEventListener("click", () => {
    const k = Number(kInput.value);
    const problem = Number.isInteger(k) && k >= 2 ? null : "k must be an integer >= 2";
    kError.textContent = problem ?? "";
    if (problem === null) handlers.onCpcRun(k);
  });

  const exportLink = document.createElement("a");
  exportLink.className = "export";
  exportLink.textContent = "Export";
  exportLink.href = handlers.exportUrl();
  exportLink.setAttribute("download", "bundle.zip");

  container.append(rows, cols, keep, compare, kInput, run, kError, exportLink);
}
