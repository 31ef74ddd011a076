"""Command line entry point: analyze, serve, export.

Exit codes: 0 ok, 2 input error, 3 processing error, 4 cyclic cluster
dependency on export.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cluster import DistanceConfig
from .errors import (
    AllUnparseable,
    CbtError,
    CyclicClusterDependency,
    EmptyHistory,
    FormatError,
    MultiFileCommit,
    NonLinearHistory,
    OutputExists,
    ParseFailure,
    PatchMismatch,
    PortInUse,
    ReplayError,
)
from .export import DEFAULT_MESSAGE_TEMPLATE, export_git, plan_export
from .pipeline import (
    analysis_to_json,
    analyze,
    load_partition_file,
    sidecar_path,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PROCESSING = 3
EXIT_CYCLE = 4

_INPUT_ERRORS = (
    FileNotFoundError,
    FormatError,
    NonLinearHistory,
    MultiFileCommit,
    EmptyHistory,
    OutputExists,
    PortInUse,
    ValueError,
)
_PROCESSING_ERRORS = (ReplayError, ParseFailure, AllUnparseable, PatchMismatch)


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="FILE", help="JSON file with distance weights")
    p.add_argument("--theta", type=float, help="clustering threshold")
    p.add_argument("--alpha-time", type=float, help="weight of the time metric")
    p.add_argument("--alpha-entries", type=float, help="weight of the in-between count metric")
    p.add_argument("--alpha-same-class", type=float, help="weight of the same-class metric")
    p.add_argument("--alpha-same-method", type=float, help="weight of the same-method metric")
    p.add_argument("--time-cap", type=float, metavar="S", help="seconds at which the time metric saturates")
    p.add_argument("--entries-cap", type=float, metavar="N", help="count at which the in-between metric saturates")


def _config_from_args(args: argparse.Namespace) -> DistanceConfig:
    cfg = DistanceConfig.from_file(args.config) if args.config else DistanceConfig()
    overrides = {
        name: getattr(args, name)
        for name in (
            "theta",
            "alpha_time",
            "alpha_entries",
            "alpha_same_class",
            "alpha_same_method",
            "time_cap",
            "entries_cap",
        )
        if getattr(args, name) is not None
    }
    if overrides:
        cfg = DistanceConfig.from_dict({**cfg.to_json(), **overrides})
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbt",
        description="Untangle a fine-grained change history into clean commits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="cluster the history and write the analysis")
    p_an.add_argument("input", help="git repository or .cbl change log")
    _add_config_flags(p_an)
    p_an.add_argument("-o", "--output", metavar="FILE", help="analysis JSON (default: stdout)")

    p_sv = sub.add_parser("serve", help="serve the interactive tailoring session")
    p_sv.add_argument("input", help="git repository or .cbl change log")
    _add_config_flags(p_sv)
    p_sv.add_argument("--port", type=int, default=7413)
    p_sv.add_argument("--fresh", action="store_true", help="ignore a saved session sidecar")

    p_ex = sub.add_parser("export", help="write the untangled repository")
    p_ex.add_argument("input", help="git repository or .cbl change log")
    _add_config_flags(p_ex)
    p_ex.add_argument("--partition", metavar="FILE", help="session sidecar or analysis file")
    p_ex.add_argument("--message-template", default=DEFAULT_MESSAGE_TEMPLATE, metavar="T")
    p_ex.add_argument("-o", "--output", required=True, metavar="DIR", help="new repository path")
    return parser


def _cmd_analyze(args: argparse.Namespace) -> int:
    if not Path(args.input).exists():
        raise FileNotFoundError(args.input)
    analysis = analyze(args.input, _config_from_args(args))
    doc = json.dumps(analysis_to_json(analysis), indent=2, ensure_ascii=False)
    if args.output:
        Path(args.output).write_text(doc + "\n", encoding="utf-8")
        print(f"analysis written to {args.output} ({len(analysis.partition.clusters)} clusters)")
    else:
        print(doc)
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    from .pipeline import partition_from_json
    from .service import SessionService, serve

    if not Path(args.input).exists():
        raise FileNotFoundError(args.input)
    analysis = analyze(args.input, _config_from_args(args))
    revision = 0
    side = sidecar_path(args.input)
    if side.exists() and not args.fresh:
        data = json.loads(side.read_text(encoding="utf-8"))
        try:
            partition = partition_from_json(data["partition"], analysis.history)
            revision = int(data.get("revision", 0))
            analysis = type(analysis)(
                history=analysis.history,
                partition=partition,
                report=analysis.report,
                config=analysis.config,
            )
            print(f"resumed session from {side} at revision {revision}", flush=True)
        except (KeyError, ValueError) as e:
            print(f"ignoring stale sidecar {side}: {e}", file=sys.stderr)
    serve(SessionService(analysis, args.input, revision), args.port)
    return EXIT_OK


def _cmd_export(args: argparse.Namespace) -> int:
    if not Path(args.input).exists():
        raise FileNotFoundError(args.input)
    analysis = analyze(args.input, _config_from_args(args))
    partition = analysis.partition
    if args.partition:
        partition = load_partition_file(args.partition, analysis.history)
    plan = plan_export(analysis.history, partition)
    ids = export_git(plan, args.output, args.message_template)
    for cid, commit in zip([c.cluster_id for c in plan.commits], ids):
        print(f"{commit} {cid}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "serve":
            return _cmd_serve(args)
        return _cmd_export(args)
    except CyclicClusterDependency as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CYCLE
    except _INPUT_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except _PROCESSING_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PROCESSING
    except CbtError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PROCESSING


if __name__ == "__main__":
    sys.exit(main())
