"""Materialize an accepted partition as an untangled history.

Planning orders clusters topologically over a replay-derived dependency
graph and squashes each cluster into one combined diff; exporting writes a
fresh git repository (root commit = base snapshot, then one commit per
cluster) plus a portable ``export.json`` bundle. The exported tree is byte
identical to the input history's final snapshot.

Dependency rule: bead u depends on an earlier bead v iff moving v after u
breaks the replay — either some hunk stops applying exactly, or the
reordered replay produces a different snapshot. The second half matters
for pure insertions, which "apply" anywhere but land on the wrong line
once an earlier insertion above them is skipped.
"""

from __future__ import annotations

import json
import subprocess
from dataclasses import dataclass
from pathlib import Path

from .errors import CyclicClusterDependency, OutputExists, PatchMismatch
from .ingest import FineHistory
from .model import ChangeBead, Hunk, Partition, Snapshot, apply_hunks, validate_partition

DEFAULT_MESSAGE_TEMPLATE = "{cluster_id}: {bead_count} change(s) in {methods}"

_GIT_IDENT = {
    "GIT_AUTHOR_NAME": "cbt",
    "GIT_AUTHOR_EMAIL": "cbt@localhost",
    "GIT_COMMITTER_NAME": "cbt",
    "GIT_COMMITTER_EMAIL": "cbt@localhost",
}


@dataclass(frozen=True)
class PlannedCommit:
    cluster_id: str
    bead_ids: tuple[str, ...]
    hunks: tuple[Hunk, ...]
    timestamp: int  # latest bead time, clamped non-decreasing in plan order
    bead_count: int
    classes: tuple[str, ...]
    methods: tuple[str, ...]
    time_range: str


@dataclass(frozen=True)
class ExportPlan:
    base: Snapshot
    final: Snapshot
    commits: tuple[PlannedCommit, ...]

    def messages(self, template: str = DEFAULT_MESSAGE_TEMPLATE) -> list[str]:
        out = []
        for c in self.commits:
            out.append(
                template.format(
                    cluster_id=c.cluster_id,
                    bead_count=c.bead_count,
                    classes=", ".join(c.classes) if c.classes else "-",
                    methods=", ".join(c.methods) if c.methods else "-",
                    time_range=c.time_range,
                )
            )
        return out


def bead_depends_on(snapshots: list[Snapshot], beads: list[ChangeBead], u: int, v: int) -> bool:
    """True iff bead seq u cannot be reordered before bead seq v (v < u)."""
    snap = snapshots[v]
    try:
        for k in range(v + 1, u):
            snap = apply_hunks(snap, beads[k])
        snap = apply_hunks(snap, beads[u])
        snap = apply_hunks(snap, beads[v])
    except PatchMismatch:
        return True
    return snap != snapshots[u + 1]


def _cluster_dependencies(
    history: FineHistory, partition: Partition
) -> tuple[dict[str, set[str]], dict[tuple[str, str], tuple[int, int]]]:
    beads = list(history.beads)
    snapshots = history.snapshots()
    owner = {b: c.id for c in partition.clusters for b in c.bead_ids}
    deps: dict[str, set[str]] = {c.id: set() for c in partition.clusters}
    witness: dict[tuple[str, str], tuple[int, int]] = {}
    for u in range(len(beads)):
        cu = owner[beads[u].id]
        for v in range(u):
            cv = owner[beads[v].id]
            if cu == cv or cv in deps[cu]:
                continue
            if bead_depends_on(snapshots, beads, u, v):
                deps[cu].add(cv)
                witness[(cu, cv)] = (u, v)
    return deps, witness


def plan_export(history: FineHistory, partition: Partition) -> ExportPlan:
    """Order clusters and squash each into one combined diff.

    Raises CyclicClusterDependency when no order exists; deterministic
    otherwise (ties broken by earliest bead seq).
    """
    from .textdiff import diff_snapshots

    beads = list(history.beads)
    validate_partition(partition, beads)
    seq_of = {b.id: b.seq for b in beads}
    deps, witness = _cluster_dependencies(history, partition)

    earliest = {c.id: min(seq_of[b] for b in c.bead_ids) for c in partition.clusters}
    remaining = {c.id: set(deps[c.id]) for c in partition.clusters}
    order: list[str] = []
    while remaining:
        ready = [cid for cid, blocked in remaining.items() if not blocked]
        if not ready:
            cycle = _find_cycle(remaining, deps)
            pair = witness[(cycle[0], cycle[1])] if (cycle[0], cycle[1]) in witness else next(
                iter(witness.values())
            )
            raise CyclicClusterDependency(cycle, pair)
        nxt = min(ready, key=earliest.__getitem__)
        order.append(nxt)
        del remaining[nxt]
        for blocked in remaining.values():
            blocked.discard(nxt)

    by_id = {c.id: c for c in partition.clusters}
    snap = history.base
    commits: list[PlannedCommit] = []
    last_ts = None
    for cid in order:
        cluster = by_id[cid]
        members = sorted((beads[seq_of[b]] for b in cluster.bead_ids), key=lambda b: b.seq)
        before = snap
        for bead in members:
            snap = apply_hunks(snap, bead)  # plan order is dependency-safe
        hunks = diff_snapshots(before, snap)
        ts = max(b.ts for b in members)
        if last_ts is not None and ts < last_ts:
            ts = last_ts
        last_ts = ts
        classes = tuple(sorted({b.enclosing_class for b in members if b.enclosing_class}))
        methods = tuple(sorted({b.enclosing_method for b in members if b.enclosing_method}))
        commits.append(
            PlannedCommit(
                cluster_id=cid,
                bead_ids=tuple(b.id for b in members),
                hunks=tuple(hunks),
                timestamp=ts,
                bead_count=len(members),
                classes=classes,
                methods=methods,
                time_range=f"{min(b.ts for b in members)}..{max(b.ts for b in members)}",
            )
        )
    final = history.final
    if snap != final:
        raise RuntimeError("planned replay diverged from the recorded history")
    return ExportPlan(base=history.base, final=final, commits=tuple(commits))


def _find_cycle(remaining: dict[str, set[str]], deps: dict[str, set[str]]) -> list[str]:
    """One dependency cycle among the still-blocked clusters."""
    nodes = set(remaining)
    start = sorted(nodes)[0]
    path: list[str] = []
    seen: set[str] = set()
    node = start
    while node not in seen:
        seen.add(node)
        path.append(node)
        node = sorted(d for d in deps[node] if d in nodes)[0]
    return path[path.index(node):] + [node]


def _run_git(cwd: Path, *args: str, env_extra: dict | None = None) -> str:
    import os

    env = dict(os.environ, **_GIT_IDENT)
    if env_extra:
        env.update(env_extra)
    res = subprocess.run(
        ["git", *args], cwd=str(cwd), capture_output=True, check=True, env=env
    )
    return res.stdout.decode("utf-8")


def _write_snapshot_delta(root: Path, old: Snapshot, new: Snapshot) -> None:
    for path in set(old.files) - set(new.files):
        (root / path).unlink()
    for path, text in new.files.items():
        if old.files.get(path) != text:
            target = root / path
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text, encoding="utf-8", newline="")


def export_git(
    plan: ExportPlan,
    out_path: str | Path,
    message_template: str = DEFAULT_MESSAGE_TEMPLATE,
) -> list[str]:
    """Create the untangled repository; returns the commit ids in order.

    Deterministic: fixed author/committer identity, commit dates from the
    plan, so two exports of one plan produce identical commits. Also drops
    an ``export.json`` bundle (untracked) into the repository.
    """
    out = Path(out_path)
    if out.exists() and any(out.iterdir()):
        raise OutputExists(str(out))
    out.mkdir(parents=True, exist_ok=True)
    _run_git(out, "init", "-q", "-b", "main")

    messages = plan.messages(message_template)
    root_ts = min((c.timestamp for c in plan.commits), default=0)
    _write_snapshot_delta(out, Snapshot({}), plan.base)
    _run_git(out, "add", "-A")
    date = f"@{root_ts} +0000"
    _run_git(
        out, "commit", "-q", "--allow-empty", "-m", "base snapshot",
        env_extra={"GIT_AUTHOR_DATE": date, "GIT_COMMITTER_DATE": date},
    )
    ids = []
    snap = plan.base
    for commit, message in zip(plan.commits, messages):
        bead = ChangeBead(id=commit.cluster_id, seq=0, ts=commit.timestamp, hunks=commit.hunks)
        new_snap = apply_hunks(snap, bead)
        _write_snapshot_delta(out, snap, new_snap)
        snap = new_snap
        _run_git(out, "add", "-A")
        date = f"@{commit.timestamp} +0000"
        _run_git(
            out, "commit", "-q", "-m", message,
            env_extra={"GIT_AUTHOR_DATE": date, "GIT_COMMITTER_DATE": date},
        )
        ids.append(_run_git(out, "rev-parse", "HEAD").strip())
    if snap != plan.final:
        raise RuntimeError("exported tree diverged from the planned final snapshot")

    bundle = {
        "version": 1,
        "order": [c.cluster_id for c in plan.commits],
        "clusters": [
            {
                "id": c.cluster_id,
                "message": m,
                "timestamp": c.timestamp,
                "bead_ids": list(c.bead_ids),
                "hunks": [
                    {"file": h.file, "start": h.start, "del": list(h.deleted), "ins": list(h.inserted)}
                    for h in c.hunks
                ],
            }
            for c, m in zip(plan.commits, messages)
        ],
    }
    (out / "export.json").write_text(json.dumps(bundle, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return ids
