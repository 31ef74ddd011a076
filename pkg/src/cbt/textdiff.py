"""Minimal line diffs between file texts, as exact-match hunks.

The edit script is LCS-minimal and deterministic. Runs of deleted and
inserted lines with no unchanged line between them form one hunk; a single
unchanged line is enough to split two hunks.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .model import Hunk, Snapshot, split_lines


def _intern(old: list[str], new: list[str]) -> tuple[np.ndarray, np.ndarray]:
    ids: dict[str, int] = {}
    a = np.empty(len(old), np.int64)
    for i, line in enumerate(old):
        a[i] = ids.setdefault(line, len(ids))
    b = np.empty(len(new), np.int64)
    for j, line in enumerate(new):
        b[j] = ids.setdefault(line, len(ids))
    return a, b


def diff_lines(old: list[str], new: list[str], file: str) -> list[Hunk]:
    """Hunks turning ``old`` lines into ``new`` lines (lines keep "\\n")."""
    a, b = _intern(old, new)
    ma, mb = _kernels.lcs_marks(a, b)
    hunks: list[Hunk] = []
    i = j = 0
    n, m = len(old), len(new)
    while i < n or j < m:
        if i < n and j < m and ma[i] and mb[j]:
            i += 1
            j += 1
            continue
        start = i + 1
        deleted: list[str] = []
        inserted: list[str] = []
        while i < n and not ma[i]:
            deleted.append(old[i])
            i += 1
        while j < m and not mb[j]:
            inserted.append(new[j])
            j += 1
        hunks.append(Hunk(file=file, start=start, deleted=tuple(deleted), inserted=tuple(inserted)))
    return hunks


def diff_texts(before: str, after: str, file: str) -> list[Hunk]:
    """Line diff of one file's before/after text."""
    if before == after:
        return []
    return diff_lines(split_lines(before), split_lines(after), file)


def diff_snapshots(before: Snapshot, after: Snapshot) -> list[Hunk]:
    """Hunks over all files (sorted by path) turning ``before`` into ``after``.

    A file missing on either side diffs against empty content, so file
    creation and deletion come out as plain insert/delete hunks.
    """
    hunks: list[Hunk] = []
    for path in sorted(set(before.files) | set(after.files)):
        hunks.extend(diff_texts(before.text(path), after.text(path), path))
    return hunks
