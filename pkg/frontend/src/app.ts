/** Wires the three linked views (matrix, CPC panel, merged graph) plus the
 * one-hot sub-view to the service API around a single ViewState. */

import { ApiClient, RegionGate, ServiceError } from "./api.js";
import { renderControls } from "./controls.js";
import { renderCpcPanel } from "./cpc.js";
import { renderMergedGraph } from "./graph.js";
import { renderMatrix } from "./matrix.js";
import { renderOneHot, renderToast } from "./onehot.js";
import {
  defaultViewState,
  type CpcPayload,
  type MatrixPayload,
  type ViewState,
} from "./types.js";

export interface AppRegions {
  controls: HTMLElement;
  matrix: HTMLElement;
  onehot: HTMLElement;
  cpc: HTMLElement;
  graph: HTMLElement;
  errors: HTMLElement;
}

export class App {
  readonly state: ViewState;
  private lastMatrix: MatrixPayload | null = null;
  private lastCpc: CpcPayload | null = null;
  private readonly gate = new RegionGate();

  constructor(
    private readonly api: ApiClient,
    private readonly regions: AppRegions,
    sessionId: string,
  ) {
    this.state = defaultViewState(sessionId);
  }

  async start(): Promise<void> {
    await this.refreshMatrix();
    await this.refreshCpc();
  }

  private banner(message: string): void {
    const el = document.createElement("div");
    el.className = "error-banner";
    el.textContent = message;
    this.regions.errors.replaceChildren(el);
  }

  private renderAllLocal(): void {
    renderControls(this.regions.controls, this.state, {
      onSortChange: (rows, cols) => {
        this.state.sort = { rows, cols };
        void this.refreshMatrix();
      },
      onKeepSelected: () => void this.keepSelected(),
      onCompareSelected: () => void this.compareSelected(),
      onCpcRun: (k) => {
        this.state.cpcK = k;
        void this.refreshCpc();
      },
      exportUrl: () => this.api.exportUrl(this.state.sessionId),
    });
    if (this.lastMatrix) {
      renderMatrix(this.regions.matrix, this.lastMatrix, this.state, {
        onColumnClick: (path) => void this.toggleColumn(path),
        onRowClick: (pid) => this.toggleRow(pid),
      });
    }
  }

  async refreshMatrix(): Promise<void> {
    try {
      const payload = await this.gate.run("matrix", () =>
        this.api.matrix(this.state.sessionId, this.state.sort, this.state.metric),
      );
      if (payload === null) return; // superseded by a newer request
      this.lastMatrix = payload;
      this.pruneState(payload);
      this.regions.errors.replaceChildren();
      this.renderAllLocal();
    } catch (err) {
      if (err instanceof ServiceError && this.state.metric !== null) {
        // selected metric no longer valid for the subset: reset to default
        this.state.metric = null;
        await this.refreshMatrix();
        return;
      }
      this.banner(err instanceof Error ? err.message : String(err));
    }
  }

  /** Selection and highlight must reference the current payload only. */
  private pruneState(payload: MatrixPayload): void {
    const ids = new Set(payload.pipeline_ids);
    const paths = new Set(payload.primitive_paths);
    this.state.selectedRows = this.state.selectedRows.filter((pid) => ids.has(pid));
    this.state.highlight = new Set([...this.state.highlight].filter((p) => paths.has(p)));
    if (this.state.expandedPrimitive !== null && !paths.has(this.state.expandedPrimitive)) {
      this.state.expandedPrimitive = null;
      this.regions.onehot.replaceChildren();
    }
  }

  async toggleColumn(path: string): Promise<void> {
    if (this.state.expandedPrimitive === path) {
      this.state.expandedPrimitive = null;
      this.regions.onehot.replaceChildren();
      this.renderAllLocal();
      return;
    }
    try {
      const payload = await this.gate.run("onehot", () =>
        this.api.hyperparams(this.state.sessionId, path),
      );
      if (payload === null) return;
      this.state.expandedPrimitive = path;
      renderOneHot(this.regions.onehot, payload);
      this.renderAllLocal();
    } catch (err) {
      // unknown primitive: toast, state unchanged
      renderToast(this.regions.onehot, err instanceof Error ? err.message : String(err));
    }
  }

  toggleRow(pipelineId: string): void {
    const i = this.state.selectedRows.indexOf(pipelineId);
    if (i >= 0) {
      this.state.selectedRows.splice(i, 1);
    } else {
      this.state.selectedRows.push(pipelineId);
    }
    this.renderAllLocal();
  }

  setHighlight(members: string[]): void {
    this.state.highlight = new Set(members);
    this.renderAllLocal();
    if (this.lastCpc) {
      renderCpcPanel(this.regions.cpc, this.lastCpc, this.state.highlight, {
        onHighlight: (m) => this.setHighlight(m),
      });
    }
  }

  async refreshCpc(): Promise<void> {
    try {
      const payload = await this.gate.run("cpc", () =>
        this.api.cpc(this.state.sessionId, this.state.cpcK, this.state.metric),
      );
      if (payload === null) return;
      this.lastCpc = payload;
      renderCpcPanel(this.regions.cpc, payload, this.state.highlight, {
        onHighlight: (members) => this.setHighlight(members),
      });
    } catch (err) {
      this.banner(err instanceof Error ? err.message : String(err));
    }
  }

  async compareSelected(): Promise<void> {
    if (this.state.selectedRows.length === 0) return;
    try {
      const payload = await this.gate.run("graph", () =>
        this.api.merge(this.state.sessionId, [...this.state.selectedRows]),
      );
      if (payload === null) return;
      renderMergedGraph(this.regions.graph, payload, this.state.selectedRows);
    } catch (err) {
      this.banner(err instanceof Error ? err.message : String(err));
    }
  }

  async keepSelected(): Promise<void> {
    if (this.state.selectedRows.length === 0) return;
    try {
      await this.api.patchSubset(this.state.sessionId, [...this.state.selectedRows]);
    } catch (err) {
      this.banner(err instanceof Error ? err.message : String(err));
      return;
    }
    await this.refreshMatrix();
    await this.refreshCpc();
    if (this.state.expandedPrimitive !== null) {
      const path = this.state.expandedPrimitive;
      this.state.expandedPrimitive = null;
      await this.toggleColumn(path);
    }
  }
}
