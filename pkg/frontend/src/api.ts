/** Typed client for the local tailoring service. */

export interface BeadInfo {
  id: string;
  seq: number;
  ts: number;
  x: number;
  y: number;
  lane_label: string;
  cluster_id: string;
  file: string;
  enclosing_class: string | null;
  enclosing_method: string | null;
}

export interface ClusterInfo {
  id: string;
  color: string;
  bead_ids: string[];
}

export interface SessionState {
  revision: number;
  beads: BeadInfo[];
  clusters: ClusterInfo[];
}

export type DiffKind = "context" | "added" | "removed";

export interface DiffLine {
  kind: DiffKind;
  text: string;
  file: string;
  owner: string | null;
  owner_bead: string | null;
  old_line: number | null;
  new_line: number | null;
}

/** Non-2xx response; `payload` carries the server's error document. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly payload: Record<string, unknown>,
  ) {
    super(typeof payload.error === "string" ? payload.error : `HTTP ${status}`);
  }

  get kind(): string {
    return typeof this.payload.kind === "string" ? this.payload.kind : "";
  }
}

export class Client {
  private readonly fetchFn: typeof fetch;

  constructor(
    private readonly base: string = "",
    fetchFn?: typeof fetch,
  ) {
    this.fetchFn = fetchFn ?? ((...args) => fetch(...args));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.base + path, init);
    const data = (await resp.json()) as Record<string, unknown>;
    if (!resp.ok) {
      throw new ApiError(resp.status, data);
    }
    return data as T;
  }

  private post<T>(path: string, body: Record<string, unknown>): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  getSession(): Promise<SessionState> {
    return this.request<SessionState>("/api/session");
  }

  async getDiff(clusterIds: string[]): Promise<DiffLine[]> {
    const resp = await this.request<{ lines: DiffLine[] }>(
      `/api/diff?clusters=${encodeURIComponent(clusterIds.join(","))}`,
    );
    return resp.lines;
  }

  split(
    revision: number,
    clusterId: string,
    beadIds: string[],
  ): Promise<{ revision: number; new_cluster: string }> {
    return this.post("/api/clusters/split", {
      revision,
      cluster_id: clusterId,
      bead_ids: beadIds,
    });
  }

  merge(
    revision: number,
    clusterIds: string[],
  ): Promise<{ revision: number; surviving_cluster: string }> {
    return this.post("/api/clusters/merge", { revision, cluster_ids: clusterIds });
  }

  undo(revision: number): Promise<{ revision: number }> {
    return this.post("/api/undo", { revision });
  }

  redo(revision: number): Promise<{ revision: number }> {
    return this.post("/api/redo", { revision });
  }

  exportRepo(
    outPath: string,
    messageTemplate?: string,
  ): Promise<{ commits: string[] }> {
    const body: Record<string, unknown> = { out_path: outPath };
    if (messageTemplate) {
      body.message_template = messageTemplate;
    }
    return this.post("/api/export", body);
  }
}
