"""End-to-end analysis flow shared by the CLI and the HTTP service.

ingest -> squash unparseable -> annotate -> initial clusters, with JSON
(de)serialization of the result and of saved partitions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .cluster import DistanceConfig, initial_clusters
from .ingest import FineHistory, load_history
from .model import Cluster, Partition, validate_partition
from .preprocess import SquashReport, squash_unparseable
from .structure import annotate_beads


@dataclass(frozen=True)
class Analysis:
    history: FineHistory  # preprocessed, beads annotated
    partition: Partition
    report: SquashReport
    config: DistanceConfig


def analyze(input_path: str | Path, cfg: DistanceConfig) -> Analysis:
    history = load_history(input_path)
    history, report = squash_unparseable(history)
    beads = annotate_beads(list(history.beads), history.base)
    history = FineHistory(base=history.base, beads=tuple(beads), origin=history.origin)
    partition = initial_clusters(history, cfg)
    return Analysis(history=history, partition=partition, report=report, config=cfg)


def partition_to_json(partition: Partition) -> dict:
    return {
        "clusters": [
            {"id": c.id, "color": c.color, "bead_ids": list(c.bead_ids)}
            for c in partition.clusters
        ]
    }


def partition_from_json(data: dict, history: FineHistory) -> Partition:
    clusters = tuple(
        Cluster(id=c["id"], color=c["color"], bead_ids=tuple(c["bead_ids"]))
        for c in data["clusters"]
    )
    partition = Partition(clusters=clusters)
    validate_partition(partition, list(history.beads))
    return partition


def analysis_to_json(analysis: Analysis) -> dict:
    return {
        "version": 1,
        "input": analysis.history.origin,
        "config": analysis.config.to_json(),
        "squash_report": analysis.report.to_json(),
        "beads": [
            {
                "id": b.id,
                "seq": b.seq,
                "ts": b.ts,
                "file": b.file,
                "enclosing_class": b.enclosing_class,
                "enclosing_method": b.enclosing_method,
                "hunks": [
                    {"file": h.file, "start": h.start, "del": list(h.deleted), "ins": list(h.inserted)}
                    for h in b.hunks
                ],
            }
            for b in analysis.history.beads
        ],
        "partition": partition_to_json(analysis.partition),
    }


def load_partition_file(path: str | Path, history: FineHistory) -> Partition:
    """Accepts a saved session sidecar or an analysis file."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "partition" in data:
        data = data["partition"]
    return partition_from_json(data, history)


def sidecar_path(input_path: str | Path) -> Path:
    return Path(str(input_path) + ".cbt-session.json")


def save_sidecar(input_path: str | Path, partition: Partition, revision: int) -> Path:
    path = sidecar_path(input_path)
    payload = {"version": 1, "revision": revision, "partition": partition_to_json(partition)}
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return path
