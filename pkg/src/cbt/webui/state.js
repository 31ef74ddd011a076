/** Client-side view state. The server owns the partition; this only tracks
 * what the user is looking at. Selected clusters always refer to clusters
 * present at `revision`; `reconcile` re-establishes that after every
 * refetch. */
export const DEFAULT_TIME_SCALE = 0.2;
export function initialView() {
    return {
        revision: -1,
        selected: [],
        timeScale: DEFAULT_TIME_SCALE,
        hover: null,
        pendingSplit: [],
    };
}
/** Drop references that no longer exist in the session payload. */
export function reconcile(view, session) {
    const clusterIds = new Set(session.clusters.map((c) => c.id));
    const beadCluster = new Map(session.beads.map((b) => [b.id, b.cluster_id]));
    const selected = view.selected.filter((id) => clusterIds.has(id));
    const selectedSet = new Set(selected);
    const pendingSplit = view.pendingSplit.filter((bead) => {
        const cluster = beadCluster.get(bead);
        return cluster !== undefined && selectedSet.has(cluster);
    });
    return { ...view, revision: session.revision, selected, pendingSplit };
}
export function toggleCluster(view, id, additive) {
    let selected;
    if (additive) {
        selected = view.selected.includes(id)
            ? view.selected.filter((c) => c !== id)
            : [...view.selected, id];
    }
    else {
        selected = view.selected.length === 1 && view.selected[0] === id ? [] : [id];
    }
    return { ...view, selected, pendingSplit: [] };
}
export function togglePending(view, beadId) {
    const pendingSplit = view.pendingSplit.includes(beadId)
        ? view.pendingSplit.filter((b) => b !== beadId)
        : [...view.pendingSplit, beadId];
    return { ...view, pendingSplit };
}
/** The split request implied by the pending marks, if they are valid:
 * all marked beads in one cluster, a proper non-empty subset of it. */
export function pendingSource(view, session) {
    if (view.pendingSplit.length === 0) {
        return null;
    }
    const beadCluster = new Map(session.beads.map((b) => [b.id, b.cluster_id]));
    const owners = new Set(view.pendingSplit.map((b) => beadCluster.get(b)));
    if (owners.size !== 1) {
        return null;
    }
    const [clusterId] = owners;
    if (clusterId === undefined) {
        return null;
    }
    const cluster = session.clusters.find((c) => c.id === clusterId);
    if (!cluster || view.pendingSplit.length >= cluster.bead_ids.length) {
        return null;
    }
    const order = new Map(cluster.bead_ids.map((b, i) => [b, i]));
    const beadIds = [...view.pendingSplit].sort((a, b) => (order.get(a) ?? 0) - (order.get(b) ?? 0));
    return { clusterId, beadIds };
}
