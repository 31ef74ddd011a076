/** Typed client for the local tailoring service. */
/** Non-2xx response; `payload` carries the server's error document. */
export class ApiError extends Error {
    constructor(status, payload) {
        super(typeof payload.error === "string" ? payload.error : `HTTP ${status}`);
        this.status = status;
        this.payload = payload;
    }
    get kind() {
        return typeof this.payload.kind === "string" ? this.payload.kind : "";
    }
}
export class Client {
    constructor(base = "", fetchFn) {
        this.base = base;
        this.fetchFn = fetchFn ?? ((...args) => fetch(...args));
    }
    async request(path, init) {
        const resp = await this.fetchFn(this.base + path, init);
        const data = (await resp.json());
        if (!resp.ok) {
            throw new ApiError(resp.status, data);
        }
        return data;
    }
    post(path, body) {
        return this.request(path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        });
    }
    getSession() {
        return this.request("/api/session");
    }
    async getDiff(clusterIds) {
        const resp = await this.request(`/api/diff?clusters=${encodeURIComponent(clusterIds.join(","))}`);
        return resp.lines;
    }
    split(revision, clusterId, beadIds) {
        return this.post("/api/clusters/split", {
            revision,
            cluster_id: clusterId,
            bead_ids: beadIds,
        });
    }
    merge(revision, clusterIds) {
        return this.post("/api/clusters/merge", { revision, cluster_ids: clusterIds });
    }
    undo(revision) {
        return this.post("/api/undo", { revision });
    }
    redo(revision) {
        return this.post("/api/redo", { revision });
    }
    exportRepo(outPath, messageTemplate) {
        const body = { out_path: outPath };
        if (messageTemplate) {
            body.message_template = messageTemplate;
        }
        return this.post("/api/export", body);
    }
}
