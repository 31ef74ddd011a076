"""Squash beads whose snapshots contain unparseable files into neighbors.

Mid-edit states (an inserted ``{`` whose ``}`` arrives two beads later)
leave snapshots that the structural parser rejects, which would strand
those beads without class/method identity. Each maximal run of beads with
an unparseable post-snapshot is merged forward into the bead that restores
parseability; a trailing run merges backward into the last parseable bead.
The final snapshot is preserved byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import AllUnparseable, ParseFailure
from .ingest import FineHistory
from .model import apply_hunks
from .structure import parse_structure
from .textdiff import diff_snapshots


@dataclass(frozen=True)
class SquashEntry:
    absorbed: tuple[int, ...]  # original seqs merged away
    into: int  # original seq of the surviving bead
    direction: str  # "forward" or "backward"


@dataclass(frozen=True)
class SquashReport:
    entries: tuple[SquashEntry, ...]

    def to_json(self) -> list[dict]:
        return [
            {"absorbed": list(e.absorbed), "into": e.into, "direction": e.direction}
            for e in self.entries
        ]


class _ParseTracker:
    """Incremental per-file parse status over a replay."""

    def __init__(self):
        self._cache: dict[str, bool] = {}
        self._status: dict[str, bool] = {}

    def _parses(self, text: str) -> bool:
        ok = self._cache.get(text)
        if ok is None:
            try:
                parse_structure(text)
                ok = True
            except ParseFailure:
                ok = False
            self._cache[text] = ok
        return ok

    def reset(self, snapshot) -> bool:
        self._status = {p: self._parses(t) for p, t in snapshot.files.items()}
        return all(self._status.values())

    def update(self, snapshot, touched: set[str]) -> bool:
        for p in touched:
            if p in snapshot.files:
                self._status[p] = self._parses(snapshot.files[p])
            else:
                self._status.pop(p, None)
        return all(self._status.values())


def squash_unparseable(history: FineHistory) -> tuple[FineHistory, SquashReport]:
    """History whose surviving beads all leave parseable snapshots, plus report.

    Raises AllUnparseable when the base snapshot does not parse or when no
    bead's post-snapshot does. When the *final* input snapshot is itself
    unparseable, the backward-merged trailing bead necessarily keeps it:
    content preservation wins over the parseable-post guarantee.
    """
    tracker = _ParseTracker()
    if not tracker.reset(history.base):
        raise AllUnparseable("base snapshot does not parse")

    snaps = [history.base]
    ok: list[bool] = []
    for bead in history.beads:
        snap = apply_hunks(snaps[-1], bead)
        snaps.append(snap)
        ok.append(tracker.update(snap, {h.file for h in bead.hunks}))

    if not any(ok):
        raise AllUnparseable("no snapshot in the history parses")

    # Group consecutive beads; a parseable bead closes its group (forward
    # absorption), a trailing unparseable run extends the last group.
    groups: list[list[int]] = []
    current: list[int] = []
    for k, good in enumerate(ok):
        current.append(k)
        if good:
            groups.append(current)
            current = []
    if current:
        groups[-1].extend(current)

    beads = []
    entries = []
    for group in groups:
        first, last = group[0], group[-1]
        absorber = max(k for k in group if ok[k])
        src = history.beads[absorber]
        if len(group) == 1:
            bead = src
        else:
            direction = "backward" if any(k > absorber for k in group) else "forward"
            entries.append(
                SquashEntry(
                    absorbed=tuple(k for k in group if k != absorber),
                    into=absorber,
                    direction=direction,
                )
            )
            hunks = diff_snapshots(snaps[first], snaps[last + 1])
            if not hunks:
                # the run cancelled itself out; nothing survives
                continue
            bead = replace(src, hunks=tuple(hunks))
        if bead.seq != len(beads):
            bead = replace(bead, seq=len(beads))
        beads.append(bead)

    out = FineHistory(
        base=history.base,
        beads=tuple(beads),
        origin=dict(history.origin),
    )
    assert out.final == history.final, "squash changed the final snapshot"
    return out, SquashReport(entries=tuple(entries))
