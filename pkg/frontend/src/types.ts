/** Wire types mirroring the service payloads (schema_version "1"). */

export interface ContributionEntry {
  value: number | null;
  n1: number;
  n0: number;
}

export interface MatrixPayload {
  schema_version: string;
  collection_id: string;
  pipeline_ids: string[];
  sources: string[];
  primitive_paths: string[];
  families: string[];
  cells: number[][];
  metric: { name: string; direction: string; values: number[] };
  contributions: Record<string, ContributionEntry>;
  row_order: number[];
  column_order: number[];
  family_boundaries: number[];
}

export interface OneHotPayload {
  schema_version: string;
  primitive: { path: string; name: string; family: string };
  columns: [string, string][];
  pipeline_ids: string[];
  cells: number[][];
}

export interface CpcGroup {
  members: string[];
  correlation: number;
  n_joint_usage: number;
}

export interface CpcPayload {
  schema_version: string;
  metric: string;
  k: number;
  subsets_evaluated: number;
  groups: CpcGroup[];
}

export interface MergedNode {
  id: string;
  labels: Record<string, string>;
  family: string;
  provenance: string[];
}

export interface MergedEdge {
  from: string;
  to: string;
  provenance: string[];
}

export interface MergedPayload {
  schema_version: string;
  pipeline_ids: string[];
  nodes: MergedNode[];
  edges: MergedEdge[];
}

export interface ApiError {
  code: string;
  message: string;
  detail: unknown;
}

export interface SortSpec {
  rows: string;
  cols: string;
}

/** Client-side state for the three linked views. */
export interface ViewState {
  sessionId: string;
  sort: SortSpec;
  metric: string | null;
  expandedPrimitive: string | null;
  selectedRows: string[];
  cpcK: number;
  highlight: Set<string>;
}

export function defaultViewState(sessionId: string): ViewState {
  return {
    sessionId,
    sort: { rows: "metric", cols: "family" },
    metric: null,
    expandedPrimitive: null,
    selectedRows: [],
    cpcK: 3,
    highlight: new Set(),
  };
}

export const SUPPORTED_SCHEMA = "1";
