/** Service client. At most one in-flight request per view region; stale
 * responses are discarded by sequence number. */

import type {
  ApiError,
  CpcPayload,
  MatrixPayload,
  MergedPayload,
  OneHotPayload,
  SortSpec,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiError,
  ) {
    super(body.message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(this.baseUrl + path, init);
    const body = await res.json();
    if (!res.ok) {
      throw new ServiceError(res.status, body as ApiError);
    }
    return body as T;
  }

  createSession(collectionId: string): Promise<{ session_id: string }> {
    return this.request("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ collection_id: collectionId }),
    });
  }

  matrix(sessionId: string, sort: SortSpec, metric: string | null): Promise<MatrixPayload> {
    const params = new URLSearchParams({ rows: sort.rows, cols: sort.cols });
    if (metric !== null) {
      params.set("metric", metric);
    }
    return this.request(`/sessions/${sessionId}/matrix?${params}`);
  }

  hyperparams(sessionId: string, primitive: string): Promise<OneHotPayload> {
    return this.request(`/sessions/${sessionId}/hyperparams/${primitive}`);
  }

  cpc(sessionId: string, k: number, metric: string | null): Promise<CpcPayload> {
    const params = new URLSearchParams({ k: String(k) });
    if (metric !== null) {
      params.set("metric", metric);
    }
    return this.request(`/sessions/${sessionId}/cpc?${params}`);
  }

  merge(sessionId: string, pipelineIds: string[]): Promise<MergedPayload> {
    return this.request(`/sessions/${sessionId}/merge`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ pipeline_ids: pipelineIds }),
    });
  }

  patchSubset(sessionId: string, keep: string[]): Promise<{ kept: number }> {
    return this.request(`/sessions/${sessionId}/subset`, {
      method: "PATCH",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ keep }),
    });
  }

  exportUrl(sessionId: string): string {
    return `${this.baseUrl}/sessions/${sessionId}/export`;
  }
}

/** Orders async responses per region: a result is delivered only if no newer
 * request for the same region was issued meanwhile. */
export class RegionGate {
  private seq = new Map<string, number>();

  async run<T>(region: string, task: () => Promise<T>): Promise<T | null> {
    const ticket = (this.seq.get(region) ?? 0) + 1;
    this.seq.set(region, ticket);
    const result = await task();
    return this.seq.get(region) === ticket ? result : null;
  }
}
