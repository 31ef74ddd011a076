"""Load fine-grained histories from a git repository or a change-log file.

Both paths produce the same in-memory shape: a base snapshot plus ordered
change beads, replay-validated before they are returned. Only files
matching the source filter (default ``*.java``) are considered; everything
else is invisible to the tool.

Change-Log v1 (``.cbl``): UTF-8 line-delimited JSON. Line 1 is the header
``{"version":1,"base":{"<path>":"<full text>", ...}}``; each following
line is one bead in seq order:
``{"seq":N,"ts":EPOCH,"file":"<path>","hunks":[{"start":N,"del":[...],"ins":[...]}]}``.
File texts and hunk lines are stored verbatim as JSON strings; hunk lines
include their terminators (the final line of a file may lack one).
"""

from __future__ import annotations

import fnmatch
import json
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    EmptyHistory,
    FormatError,
    MultiFileCommit,
    NonLinearHistory,
    PatchMismatch,
    ReplayError,
)
from .model import ChangeBead, Hunk, Snapshot, apply_hunks
from .textdiff import diff_snapshots

DEFAULT_SOURCE_FILTER = "*.java"


@dataclass(frozen=True)
class FineHistory:
    """Base snapshot + ordered beads; replays cleanly end to end."""

    base: Snapshot
    beads: tuple[ChangeBead, ...]
    origin: dict = field(default_factory=dict)

    @property
    def final(self) -> Snapshot:
        snap = self.base
        for bead in self.beads:
            snap = apply_hunks(snap, bead)
        return snap

    def snapshots(self) -> list[Snapshot]:
        """All N+1 states; snapshots()[k] is the state before bead k."""
        out = [self.base]
        for bead in self.beads:
            out.append(apply_hunks(out[-1], bead))
        return out


def _validate_replay(base: Snapshot, beads: list[ChangeBead]) -> None:
    snap = base
    for bead in beads:
        try:
            snap = apply_hunks(snap, bead)
        except PatchMismatch as pm:
            raise ReplayError(bead.seq, pm) from pm


def matches_filter(path: str, pattern: str = DEFAULT_SOURCE_FILTER) -> bool:
    return fnmatch.fnmatch(Path(path).name, pattern)


# --- Change-Log v1 -----------------------------------------------------------


def ingest_change_log(path: str | Path, source_filter: str = DEFAULT_SOURCE_FILTER) -> FineHistory:
    """Parse and replay-validate a ``.cbl`` file."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        raw_lines = fh.read().splitlines()
    if not raw_lines:
        raise FormatError(1, "empty file")
    try:
        header = json.loads(raw_lines[0])
    except json.JSONDecodeError as e:
        raise FormatError(1, f"invalid JSON: {e.msg}") from None
    if not isinstance(header, dict) or header.get("version") != 1:
        raise FormatError(1, "missing or unsupported version (want 1)")
    base_map = header.get("base")
    if not isinstance(base_map, dict):
        raise FormatError(1, "header has no base snapshot")
    base_files = {}
    for p, text in base_map.items():
        if not isinstance(text, str):
            raise FormatError(1, f"base text for {p} is not a string")
        if matches_filter(p, source_filter) and text != "":
            base_files[p] = text
    base = Snapshot(base_files)

    beads: list[ChangeBead] = []
    prev_ts = None
    for line_no, raw in enumerate(raw_lines[1:], start=2):
        if not raw.strip():
            continue
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as e:
            raise FormatError(line_no, f"invalid JSON: {e.msg}") from None
        for key in ("seq", "ts", "file", "hunks"):
            if key not in rec:
                raise FormatError(line_no, f"missing field {key}")
        if rec["seq"] != len(beads):
            raise FormatError(line_no, f"seq {rec['seq']} out of order (expected {len(beads)})")
        if not isinstance(rec["ts"], int):
            raise FormatError(line_no, "ts must be an integer epoch time")
        if prev_ts is not None and rec["ts"] < prev_ts:
            raise FormatError(line_no, f"timestamp {rec['ts']} decreases (previous {prev_ts})")
        prev_ts = rec["ts"]
        file = rec["file"]
        if not isinstance(file, str) or not file:
            raise FormatError(line_no, "file must be a non-empty string")
        if not matches_filter(file, source_filter):
            raise FormatError(line_no, f"file {file} does not match source filter {source_filter}")
        hunk_list = rec["hunks"]
        if not isinstance(hunk_list, list) or not hunk_list:
            raise FormatError(line_no, "hunks must be a non-empty list")
        hunks = []
        for h in hunk_list:
            try:
                hunks.append(
                    Hunk(
                        file=file,
                        start=h["start"],
                        deleted=tuple(h.get("del", [])),
                        inserted=tuple(h.get("ins", [])),
                    )
                )
            except (KeyError, TypeError, ValueError) as e:
                raise FormatError(line_no, f"bad hunk: {e}") from None
        beads.append(ChangeBead(id=f"b{rec['seq']}", seq=rec["seq"], ts=rec["ts"], hunks=tuple(hunks)))
    if not beads:
        raise EmptyHistory("change log contains no beads")
    _validate_replay(base, beads)
    return FineHistory(
        base=base,
        beads=tuple(beads),
        origin={"source": str(path), "format": "cbl"},
    )


def write_change_log(history: FineHistory, path: str | Path) -> None:
    """Serialize a history back to Change-Log v1.

    The format holds one file per bead, so histories whose beads span
    multiple files (possible after squashing) are not representable.
    """
    records = [json.dumps({"version": 1, "base": dict(history.base.files)}, ensure_ascii=False)]
    for bead in history.beads:
        files = {h.file for h in bead.hunks}
        if len(files) > 1:
            raise ValueError(
                f"bead {bead.id} spans {len(files)} files; Change-Log v1 is single-file per bead"
            )
        records.append(
            json.dumps(
                {
                    "seq": bead.seq,
                    "ts": bead.ts,
                    "file": bead.file,
                    "hunks": [
                        {"start": h.start, "del": list(h.deleted), "ins": list(h.inserted)}
                        for h in bead.hunks
                    ],
                },
                ensure_ascii=False,
            )
        )
    Path(path).write_text("\n".join(records) + "\n", encoding="utf-8")


# --- Git ---------------------------------------------------------------------


def _git(repo: Path, *args: str) -> str:
    # no text=True: universal-newline translation would corrupt file bytes
    res = subprocess.run(
        ["git", "-C", str(repo), *args],
        capture_output=True,
        check=True,
    )
    return res.stdout.decode("utf-8")


def _tree_snapshot(repo: Path, commit: str, source_filter: str) -> Snapshot:
    listing = _git(repo, "ls-tree", "-r", "--name-only", commit)
    files = {}
    for p in listing.splitlines():
        if matches_filter(p, source_filter):
            text = _git(repo, "show", f"{commit}:{p}")
            if text != "":
                files[p] = text
    return Snapshot(files)


def ingest_git(
    repo_path: str | Path,
    branch: str = "HEAD",
    source_filter: str = DEFAULT_SOURCE_FILTER,
) -> FineHistory:
    """One bead per non-root commit of a linear branch history.

    Hunks are recomputed with the package's own differ against the parent
    tree, so a git history and a change log of the same edits come out
    bead-for-bead identical. Commits touching no source file produce no
    bead; commits touching more than one are rejected. Committer times are
    used and clamped to be non-decreasing.
    """
    repo = Path(repo_path)
    out = _git(repo, "rev-list", "--reverse", "--parents", branch)
    rows = [line.split() for line in out.splitlines() if line.strip()]
    if not rows:
        raise EmptyHistory(f"no commits on {branch}")
    for row in rows:
        if len(row) > 2:
            raise NonLinearHistory(row[0])
    commits = [row[0] for row in rows]
    base = _tree_snapshot(repo, commits[0], source_filter)

    beads: list[ChangeBead] = []
    prev_snap = base
    prev_ts = None
    for commit in commits[1:]:
        snap = _tree_snapshot(repo, commit, source_filter)
        hunks = diff_snapshots(prev_snap, snap)
        if not hunks:
            prev_snap = snap
            continue
        touched = sorted({h.file for h in hunks})
        if len(touched) > 1:
            raise MultiFileCommit(commit, touched)
        ts = int(_git(repo, "show", "-s", "--format=%ct", commit).strip())
        if prev_ts is not None and ts < prev_ts:
            ts = prev_ts
        prev_ts = ts
        beads.append(ChangeBead(id=commit, seq=len(beads), ts=ts, hunks=tuple(hunks)))
        prev_snap = snap
    if not beads:
        raise EmptyHistory("no commit changes any source file")
    _validate_replay(base, beads)
    return FineHistory(
        base=base,
        beads=tuple(beads),
        origin={
            "source": str(repo),
            "format": "git",
            "branch": branch,
            "root": commits[0],
            "tip": commits[-1],
        },
    )


def load_history(path: str | Path, source_filter: str = DEFAULT_SOURCE_FILTER) -> FineHistory:
    """Dispatch on the input kind: ``.cbl`` file or git repository."""
    p = Path(path)
    if p.is_file():
        return ingest_change_log(p, source_filter)
    if p.is_dir():
        return ingest_git(p, source_filter=source_filter)
    raise FileNotFoundError(str(path))
