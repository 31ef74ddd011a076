"""Exception types raised across the package.

Everything derives from CbtError so callers (CLI, HTTP service) can map
failures to exit codes / status codes in one place.
"""

from __future__ import annotations


class CbtError(Exception):
    """Base class for all domain errors."""


class PatchMismatch(CbtError):
    """A hunk's recorded content disagrees with the file it is applied to."""

    def __init__(self, file: str, line: int, detail: str = ""):
        self.file = file
        self.line = line
        msg = f"patch mismatch in {file} at line {line}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NonLinearHistory(CbtError):
    """The input repository contains a merge commit."""

    def __init__(self, commit: str):
        self.commit = commit
        super().__init__(f"history is not linear: merge commit {commit}")


class MultiFileCommit(CbtError):
    """A micro-commit touches more than one source file."""

    def __init__(self, commit: str, files: list[str]):
        self.commit = commit
        self.files = files
        super().__init__(
            f"commit {commit} touches {len(files)} source files ({', '.join(files)}); "
            "micro-commits must be single-file"
        )


class EmptyHistory(CbtError):
    """No fine-grained changes could be extracted from the input."""


class FormatError(CbtError):
    """A change-log file violates the Change-Log v1 format."""

    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"change log line {line_no}: {reason}")


class ReplayError(CbtError):
    """Replay validation of an ingested history failed."""

    def __init__(self, seq: int, cause: PatchMismatch):
        self.seq = seq
        self.cause = cause
        super().__init__(f"replay failed at change {seq}: {cause}")


class ParseFailure(CbtError):
    """A source file cannot be structurally parsed.

    reason is one of: unbalanced-braces, unterminated-literal,
    unterminated-comment.
    """

    def __init__(self, reason: str, file: str | None = None, seq: int | None = None):
        self.reason = reason
        self.file = file
        self.seq = seq
        where = f" in {file}" if file else ""
        at = f" (change {seq})" if seq is not None else ""
        super().__init__(f"parse failure{where}{at}: {reason}")


class AllUnparseable(CbtError):
    """No snapshot in the history parses; squashing cannot produce output."""


class UnknownFile(CbtError):
    """Lookup of a file absent from a structural map."""

    def __init__(self, file: str):
        self.file = file
        super().__init__(f"no structural information for {file}")


class UnknownCluster(CbtError):
    """A cluster id does not exist in the current partition."""

    def __init__(self, cluster_id: str):
        self.cluster_id = cluster_id
        super().__init__(f"unknown cluster {cluster_id}")


class NotProperSubset(CbtError):
    """Split selection is empty, the whole cluster, or contains foreign beads."""


class FewerThanTwo(CbtError):
    """Merge needs at least two distinct clusters."""


class SelectionPatchConflict(CbtError):
    """A selected bead's hunks need the effect of an unselected earlier bead."""

    def __init__(self, seq: int):
        self.seq = seq
        super().__init__(
            f"change {seq} does not apply when unselected changes are skipped; "
            "widen the selection"
        )


class CyclicClusterDependency(CbtError):
    """Clusters depend on each other in both directions; no commit order exists."""

    def __init__(self, cluster_ids: list[str], witness: tuple[int, int]):
        self.cluster_ids = cluster_ids
        self.witness = witness
        super().__init__(
            f"clusters {' -> '.join(cluster_ids)} form a dependency cycle "
            f"(witness: change {witness[0]} depends on change {witness[1]}); "
            "merge them or re-split"
        )


class OutputExists(CbtError):
    """Export target directory exists and is not empty."""

    def __init__(self, path: str):
        self.path = path
        super().__init__(f"output path exists and is not empty: {path}")


class PortInUse(CbtError):
    """The requested service port is already bound."""

    def __init__(self, port: int):
        self.port = port
        super().__init__(f"port {port} is already in use")
