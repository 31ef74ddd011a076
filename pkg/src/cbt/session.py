"""Mutable tailoring session: split/merge clusters, undo/redo, diff, map.

One session owns one history and one partition. All mutations validate the
partition afterwards and snapshot the previous state for undo; redo is
cleared by any new mutation. Mutations must be externally serialized (the
HTTP service funnels them through one lock); reads are safe to run
concurrently with each other.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import (
    FewerThanTwo,
    NotProperSubset,
    SelectionPatchConflict,
    UnknownCluster,
)
from .ingest import FineHistory
from .model import (
    Cluster,
    Partition,
    palette_color,
    order_clusters,
    split_lines,
    validate_partition,
)


@dataclass(frozen=True)
class DiffLine:
    kind: str  # "context" | "added" | "removed"
    text: str  # line content including its terminator (if any)
    file: str
    owner: str | None = None  # cluster id; set for added/removed lines
    owner_bead: str | None = None  # the bead that wrote/deleted the line
    old_line: int | None = None  # 1-based in the selection base
    new_line: int | None = None  # 1-based in the selection result


@dataclass(frozen=True)
class AugmentedDiff:
    lines: tuple[DiffLine, ...]

    def to_json(self) -> list[dict]:
        return [
            {
                "kind": ln.kind,
                "text": ln.text,
                "file": ln.file,
                "owner": ln.owner,
                "owner_bead": ln.owner_bead,
                "old_line": ln.old_line,
                "new_line": ln.new_line,
            }
            for ln in self.lines
        ]


@dataclass(frozen=True)
class MapPoint:
    bead_id: str
    x: int  # timestamp, epoch seconds; the client scales
    y: int  # lane index
    cluster_id: str
    label: str


class ClusterSession:
    """Tailoring state for one history; see module docstring for locking."""

    def __init__(self, history: FineHistory, partition: Partition):
        self.history = history
        self._beads = list(history.beads)
        self._seq_of = {b.id: b.seq for b in self._beads}
        validate_partition(partition, self._beads)
        self.partition = partition
        self._undo: list[tuple[Partition, int]] = []
        self._redo: list[tuple[Partition, int]] = []
        self.next_color_index = len(partition.clusters)
        self._next_cluster_no = self._highest_cluster_no() + 1

    def _highest_cluster_no(self) -> int:
        best = 0
        for c in self.partition.clusters:
            if c.id.startswith("c") and c.id[1:].isdigit():
                best = max(best, int(c.id[1:]))
        return best

    def _require_cluster(self, cluster_id: str) -> Cluster:
        c = self.partition.cluster(cluster_id)
        if c is None:
            raise UnknownCluster(cluster_id)
        return c

    def _commit(self, clusters: list[Cluster]) -> None:
        new_partition = order_clusters(clusters, self._beads)
        validate_partition(new_partition, self._beads)
        self._undo.append((self.partition, self.next_color_index))
        self._redo.clear()
        self.partition = new_partition

    # --- mutations -----------------------------------------------------------

    def split_cluster(self, cluster_id: str, bead_ids: list[str]) -> str:
        """Extract a proper subset into a new cluster; returns its id."""
        cluster = self._require_cluster(cluster_id)
        picked = set(bead_ids)
        if not picked or not picked < set(cluster.bead_ids):
            raise NotProperSubset(
                f"selection must be a proper non-empty subset of cluster {cluster_id}"
            )
        remaining = tuple(b for b in cluster.bead_ids if b not in picked)
        extracted = tuple(sorted(picked, key=self._seq_of.__getitem__))
        new_id = f"c{self._next_cluster_no}"
        self._next_cluster_no += 1
        new_cluster = Cluster(id=new_id, bead_ids=extracted, color=palette_color(self.next_color_index))
        others = [c for c in self.partition.clusters if c.id != cluster_id]
        self._commit(others + [replace(cluster, bead_ids=remaining), new_cluster])
        self.next_color_index += 1
        return new_id

    def merge_clusters(self, cluster_ids: list[str]) -> str:
        """Unite clusters under the one holding the earliest bead; returns its id."""
        if len(set(cluster_ids)) < 2:
            raise FewerThanTwo("merge needs at least two distinct clusters")
        clusters = [self._require_cluster(cid) for cid in set(cluster_ids)]
        survivor = min(clusters, key=lambda c: min(self._seq_of[b] for b in c.bead_ids))
        united = sorted(
            (b for c in clusters for b in c.bead_ids), key=self._seq_of.__getitem__
        )
        merged = replace(survivor, bead_ids=tuple(united))
        gone = {c.id for c in clusters}
        others = [c for c in self.partition.clusters if c.id not in gone]
        self._commit(others + [merged])
        return survivor.id

    def undo(self) -> bool:
        if not self._undo:
            return False
        self._redo.append((self.partition, self.next_color_index))
        self.partition, self.next_color_index = self._undo.pop()
        return True

    def redo(self) -> bool:
        if not self._redo:
            return False
        self._undo.append((self.partition, self.next_color_index))
        self.partition, self.next_color_index = self._redo.pop()
        return True

    # --- reads ---------------------------------------------------------------

    def augmented_diff(self, selected: list[str]) -> AugmentedDiff:
        """Diff of the selected clusters' combined effect, lines owned by cluster.

        The base is the snapshot just before the earliest selected bead;
        selected beads are replayed in seq order while unselected ones are
        skipped. A selected hunk that no longer applies raises
        SelectionPatchConflict with the blocking seq.
        """
        clusters = [self._require_cluster(cid) for cid in selected]
        owner_of = {b: c.id for c in clusters for b in c.bead_ids}
        chosen = sorted(
            (self._beads[self._seq_of[b]] for b in owner_of), key=lambda b: b.seq
        )
        k0 = chosen[0].seq
        base = self.history.snapshots()[k0]

        # composite per-file line lists:
        # (text, owner cluster or None, owner bead or None, base index or None)
        state: dict[str, list[tuple[str, str | None, str | None, int | None]]] = {
            path: [(line, None, None, i) for i, line in enumerate(split_lines(text))]
            for path, text in base.files.items()
        }
        removed_by: dict[str, dict[int, tuple[str, str]]] = {path: {} for path in state}

        for bead in chosen:
            owner = owner_of[bead.id]
            per_file: dict[str, list] = {}
            for h in bead.hunks:
                per_file.setdefault(h.file, []).append(h)
            for path, hunks in per_file.items():
                entries = state.setdefault(path, [])
                removed = removed_by.setdefault(path, {})
                hunks.sort(key=lambda h: h.start)
                out: list[tuple[str, str | None, str | None, int | None]] = []
                cursor = 0
                for h in hunks:
                    idx = h.start - 1
                    if idx < cursor or idx > len(entries):
                        raise SelectionPatchConflict(bead.seq)
                    out.extend(entries[cursor:idx])
                    for k, want in enumerate(h.deleted):
                        if idx + k >= len(entries) or entries[idx + k][0] != want:
                            raise SelectionPatchConflict(bead.seq)
                        base_idx = entries[idx + k][3]
                        if base_idx is not None:
                            removed[base_idx] = (owner, bead.id)
                    out.extend((line, owner, bead.id, None) for line in h.inserted)
                    cursor = idx + len(h.deleted)
                out.extend(entries[cursor:])
                state[path] = out

        lines: list[DiffLine] = []
        for path in sorted(state):
            entries = state[path]
            removed = removed_by.get(path, {})
            base_lines = split_lines(base.text(path))
            if not removed and all(e[1] is None for e in entries):
                continue  # untouched file
            removed_idxs = sorted(removed)
            r_ptr = 0
            new_no = 0
            pending: list[tuple[str, str, str]] = []  # buffered (text, owner, bead) adds

            def emit_removed_before(limit: int | None):
                # removals anchored before the next context line come first
                nonlocal r_ptr
                while r_ptr < len(removed_idxs) and (limit is None or removed_idxs[r_ptr] < limit):
                    i = removed_idxs[r_ptr]
                    owner, bead_id = removed[i]
                    lines.append(
                        DiffLine(
                            kind="removed",
                            text=base_lines[i],
                            file=path,
                            owner=owner,
                            owner_bead=bead_id,
                            old_line=i + 1,
                        )
                    )
                    r_ptr += 1

            def emit_pending():
                nonlocal new_no
                for text, owner, bead_id in pending:
                    new_no += 1
                    lines.append(
                        DiffLine(
                            kind="added",
                            text=text,
                            file=path,
                            owner=owner,
                            owner_bead=bead_id,
                            new_line=new_no,
                        )
                    )
                pending.clear()

            for text, owner, bead_id, base_idx in entries:
                if owner is None:
                    emit_removed_before(base_idx)
                    emit_pending()
                    new_no += 1
                    lines.append(
                        DiffLine(
                            kind="context",
                            text=text,
                            file=path,
                            old_line=base_idx + 1,
                            new_line=new_no,
                        )
                    )
                else:
                    pending.append((text, owner, bead_id))
            emit_removed_before(None)
            emit_pending()
        return AugmentedDiff(lines=tuple(lines))

    def project_beads(self) -> list[MapPoint]:
        """Map points: x = timestamp, y = location lane, colored by cluster."""
        lanes: dict[tuple[str, str | None, str | None], int] = {}
        points = []
        for bead in self._beads:
            key = (bead.file, bead.enclosing_class, bead.enclosing_method)
            lane = lanes.setdefault(key, len(lanes))
            if bead.enclosing_class and bead.enclosing_method:
                label = bead.enclosing_method
            elif bead.enclosing_class:
                label = bead.enclosing_class
            else:
                label = bead.file
            points.append(
                MapPoint(
                    bead_id=bead.id,
                    x=bead.ts,
                    y=lane,
                    cluster_id=self.partition.cluster_of(bead.id).id,
                    label=label,
                )
            )
        return points
