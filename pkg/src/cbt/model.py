"""Core value types: hunks, change beads, snapshots, clusters, partitions.

All types are immutable values; every mutation produces a new value, so
instances are safe to share freely.

Line convention used throughout the package: a file's text is split on
"\\n" and each line *keeps* its terminator; the final line of a file may
lack one. ``"".join(split_lines(text)) == text`` holds for every string,
which is what makes replay byte-exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .errors import PatchMismatch

# Fixed display palette, cycled by cluster creation order. 12 visually
# distinct colors so neighboring clusters never share a color in practice.
PALETTE: tuple[str, ...] = (
    "#e41a1c",
    "#377eb8",
    "#4daf4a",
    "#984ea3",
    "#ff7f00",
    "#a65628",
    "#f781bf",
    "#17becf",
    "#bcbd22",
    "#66c2a5",
    "#e7298a",
    "#1b9e77",
)


def palette_color(index: int) -> str:
    return PALETTE[index % len(PALETTE)]


def split_lines(text: str) -> list[str]:
    """Split into lines that keep their "\\n"; the last may be unterminated."""
    if not text:
        return []
    parts = text.split("\n")
    tail = parts.pop()
    lines = [p + "\n" for p in parts]
    if tail:
        lines.append(tail)
    return lines


@dataclass(frozen=True)
class Hunk:
    """One contiguous edit: delete ``deleted`` at ``start``, insert ``inserted``.

    ``start`` is the 1-based line position in the file *before* the change;
    insertions land before the line that currently sits there (so
    ``start == line_count + 1`` appends). ``deleted``/``inserted`` entries
    are full lines including terminators.
    """

    file: str
    start: int
    deleted: tuple[str, ...] = ()
    inserted: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.deleted and not self.inserted:
            raise ValueError("hunk deletes and inserts nothing")
        if self.start < 1:
            raise ValueError(f"hunk start must be >= 1, got {self.start}")


@dataclass(frozen=True)
class ChangeBead:
    """One fine-grained change (micro-commit) of the recorded history."""

    id: str
    seq: int
    ts: int
    hunks: tuple[Hunk, ...]
    enclosing_class: str | None = None
    enclosing_method: str | None = None

    def __post_init__(self):
        if not self.hunks:
            raise ValueError(f"bead {self.id} has no hunks")
        if self.enclosing_class is None and self.enclosing_method is not None:
            raise ValueError(f"bead {self.id} has a method but no class")

    @property
    def file(self) -> str:
        """File of the first hunk; structural identity of multi-hunk beads."""
        return self.hunks[0].file


@dataclass(frozen=True)
class Snapshot:
    """Full source state: path -> file text.

    Never holds empty files: a file whose content becomes "" is treated as
    deleted, so snapshots round-trip through hunks unambiguously.
    """

    files: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "files", dict(self.files))
        for path, text in self.files.items():
            if text == "":
                raise ValueError(f"snapshot holds empty file {path}; drop it instead")

    def text(self, path: str) -> str:
        return self.files.get(path, "")

    def __eq__(self, other) -> bool:
        return isinstance(other, Snapshot) and self.files == other.files


def _apply_to_lines(lines: list[str], hunks: list[Hunk], file: str) -> list[str]:
    out: list[str] = []
    cursor = 0
    for h in hunks:
        idx = h.start - 1
        if idx < cursor or idx > len(lines):
            raise PatchMismatch(file, h.start, "hunk position out of range")
        out.extend(lines[cursor:idx])
        for k, want in enumerate(h.deleted):
            if idx + k >= len(lines):
                raise PatchMismatch(file, idx + k + 1, "file ends before deleted line")
            if lines[idx + k] != want:
                raise PatchMismatch(file, idx + k + 1)
        out.extend(h.inserted)
        cursor = idx + len(h.deleted)
    out.extend(lines[cursor:])
    return out


def apply_hunks(base: Snapshot, bead: ChangeBead) -> Snapshot:
    """Apply one bead's hunks to ``base``, returning a new snapshot.

    Hunks are grouped per file and applied in ascending start order against
    the pre-change line numbering (offsets accumulate). Matching is exact;
    any disagreement raises PatchMismatch.
    """
    per_file: dict[str, list[Hunk]] = {}
    for h in bead.hunks:
        per_file.setdefault(h.file, []).append(h)
    files = dict(base.files)
    for path, hunks in per_file.items():
        hunks.sort(key=lambda h: h.start)
        lines = split_lines(files.get(path, ""))
        new_lines = _apply_to_lines(lines, hunks, path)
        new_text = "".join(new_lines)
        if new_text:
            files[path] = new_text
        else:
            files.pop(path, None)
    return Snapshot(files)


def snapshot_at(beads: Iterable[ChangeBead], base: Snapshot, k: int) -> Snapshot:
    """State after applying the first ``k`` beads (k=0 returns the base)."""
    snap = base
    for i, bead in enumerate(beads):
        if i >= k:
            break
        snap = apply_hunks(snap, bead)
    return snap


@dataclass(frozen=True)
class Cluster:
    """A set of beads intended to become one untangled commit."""

    id: str
    bead_ids: tuple[str, ...]
    color: str

    def __post_init__(self):
        if not self.bead_ids:
            raise ValueError(f"cluster {self.id} is empty")


@dataclass(frozen=True)
class Partition:
    """Set partition of all bead ids, clusters ordered by earliest bead seq."""

    clusters: tuple[Cluster, ...]

    def cluster(self, cluster_id: str) -> Cluster | None:
        for c in self.clusters:
            if c.id == cluster_id:
                return c
        return None

    def cluster_of(self, bead_id: str) -> Cluster:
        for c in self.clusters:
            if bead_id in c.bead_ids:
                return c
        raise KeyError(bead_id)


def validate_partition(partition: Partition, beads: list[ChangeBead]) -> None:
    """Check disjointness, coverage, per-cluster seq order and cluster order."""
    seq_of = {b.id: b.seq for b in beads}
    seen: set[str] = set()
    for c in partition.clusters:
        seqs = []
        for bid in c.bead_ids:
            if bid not in seq_of:
                raise ValueError(f"cluster {c.id} references unknown bead {bid}")
            if bid in seen:
                raise ValueError(f"bead {bid} appears in more than one cluster")
            seen.add(bid)
            seqs.append(seq_of[bid])
        if seqs != sorted(seqs) or len(set(seqs)) != len(seqs):
            raise ValueError(f"cluster {c.id} beads are not strictly seq-sorted")
    if seen != set(seq_of):
        missing = sorted(set(seq_of) - seen, key=lambda b: seq_of[b])
        raise ValueError(f"partition does not cover beads {missing}")
    firsts = [min(seq_of[b] for b in c.bead_ids) for c in partition.clusters]
    if firsts != sorted(firsts):
        raise ValueError("clusters are not ordered by earliest bead seq")


def order_clusters(clusters: Iterable[Cluster], beads: list[ChangeBead]) -> Partition:
    """Build a Partition with clusters sorted by their earliest bead."""
    seq_of = {b.id: b.seq for b in beads}
    ordered = sorted(clusters, key=lambda c: min(seq_of[b] for b in c.bead_ids))
    return Partition(tuple(ordered))


def with_sorted_beads(cluster: Cluster, beads: list[ChangeBead]) -> Cluster:
    seq_of = {b.id: b.seq for b in beads}
    return replace(cluster, bead_ids=tuple(sorted(cluster.bead_ids, key=seq_of.__getitem__)))
