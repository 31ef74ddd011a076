"""cbt: untangle fine-grained change histories into clean commits.

Pipeline: ingest a micro-commit history (git or change log), squash
unparseable intermediate states, annotate each change with its enclosing
class/method, cluster by weighted temporal+structural distance, let a
human tailor the clusters (split/merge with an attributed diff and a
time-by-location map), and export one squashed commit per cluster.
"""

from .cluster import DistanceConfig, distance, initial_clusters
from .errors import CbtError
from .ingest import FineHistory, ingest_change_log, ingest_git, load_history
from .model import ChangeBead, Cluster, Hunk, Partition, Snapshot, apply_hunks, snapshot_at
from .pipeline import analyze
from .preprocess import squash_unparseable
from .session import AugmentedDiff, ClusterSession, MapPoint
from .structure import annotate_beads, locate, parse_structure
from .textdiff import diff_snapshots, diff_texts

__version__ = "0.1.0"

__all__ = [
    "AugmentedDiff",
    "CbtError",
    "ChangeBead",
    "Cluster",
    "ClusterSession",
    "DistanceConfig",
    "FineHistory",
    "Hunk",
    "MapPoint",
    "Partition",
    "Snapshot",
    "analyze",
    "annotate_beads",
    "apply_hunks",
    "diff_snapshots",
    "diff_texts",
    "distance",
    "ingest_change_log",
    "ingest_git",
    "initial_clusters",
    "load_history",
    "locate",
    "parse_structure",
    "snapshot_at",
    "squash_unparseable",
    "__version__",
]
