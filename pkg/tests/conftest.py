"""Shared fixtures and random-history generators."""

from __future__ import annotations

import random

import pytest

from cbt._kernels import warmup
from cbt.cluster import DistanceConfig
from cbt.fixtures import fig1_history
from cbt.ingest import FineHistory
from cbt.model import ChangeBead, Hunk, Snapshot, split_lines
from cbt.structure import annotate_beads
from cbt.textdiff import diff_texts


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    warmup()


@pytest.fixture(scope="session")
def fig1() -> FineHistory:
    h = fig1_history()
    beads = annotate_beads(list(h.beads), h.base)
    return FineHistory(base=h.base, beads=tuple(beads), origin=h.origin)


@pytest.fixture(scope="session")
def default_cfg() -> DistanceConfig:
    return DistanceConfig()


# --- random text histories (diff / export material) --------------------------


def random_text(rng: random.Random, max_lines: int = 30, alphabet: int = 12) -> str:
    n = rng.randrange(max_lines + 1)
    return "".join(f"line-{rng.randrange(alphabet)}\n" for _ in range(n))


def mutate_text(rng: random.Random, text: str, max_edits: int = 3) -> str:
    lines = split_lines(text)
    for _ in range(rng.randrange(1, max_edits + 1)):
        op = rng.choice(("insert", "delete", "replace"))
        if op == "insert" or not lines:
            pos = rng.randrange(len(lines) + 1)
            lines.insert(pos, f"line-{rng.randrange(12)}\n")
        elif op == "delete":
            lines.pop(rng.randrange(len(lines)))
        else:
            lines[rng.randrange(len(lines))] = f"line-{rng.randrange(12)}\n"
    return "".join(lines)


def random_text_history(rng: random.Random, n_beads: int, n_files: int = 2) -> FineHistory:
    """Replayable history of random line edits over a few files."""
    files = {}
    for k in range(n_files):
        text = random_text(rng)
        if text:
            files[f"F{k}.java"] = text
    base = Snapshot(files)
    snap = base
    beads = []
    ts = 1_000_000
    while len(beads) < n_beads:
        path = f"F{rng.randrange(n_files)}.java"
        old = snap.text(path)
        new = mutate_text(rng, old)
        hunks = diff_texts(old, new, path)
        if not hunks:
            continue
        ts += rng.randrange(1, 500)
        bead = ChangeBead(id=f"b{len(beads)}", seq=len(beads), ts=ts, hunks=tuple(hunks))
        beads.append(bead)
        from cbt.model import apply_hunks

        snap = apply_hunks(snap, bead)
    return FineHistory(base=base, beads=tuple(beads), origin={"source": "random", "format": "test"})


# --- random java-ish histories (preprocess material) --------------------------


def _method_lines(name: str) -> list[str]:
    return [f"    void {name}() {{\n", f"        count = count + 1;\n", "    }\n"]


def random_java_history(
    rng: random.Random, n_edits: int, break_prob: float = 0.35
) -> FineHistory:
    """History of whole-method insertions, some split into unbalanced halves.

    A split insertion lands the method header (unbalanced braces) in one
    bead and the body+closer in the next, opening a window where the
    snapshot does not parse. The final snapshot always parses.
    """
    path = "W.java"
    base_text = "class W {\n    int count;\n}\n"
    base = Snapshot({path: base_text})
    snap_lines = split_lines(base_text)
    beads: list[ChangeBead] = []
    ts = 5_000_000
    counter = 0

    def emit(new_lines: list[str]):
        nonlocal snap_lines, ts
        old = "".join(snap_lines)
        new = "".join(new_lines)
        hunks = diff_texts(old, new, path)
        if not hunks:
            return
        ts += rng.randrange(1, 100)
        beads.append(
            ChangeBead(id=f"b{len(beads)}", seq=len(beads), ts=ts, hunks=tuple(hunks))
        )
        snap_lines = new_lines

    while len(beads) < n_edits:
        counter += 1
        pos = len(snap_lines) - 1  # before the class's closing brace
        method = _method_lines(f"m{counter}")
        if rng.random() < break_prob:
            first = snap_lines[:pos] + method[:1] + snap_lines[pos:]
            emit(first)
            second = first[:pos + 1] + method[1:] + first[pos + 1:]
            emit(second)
        else:
            emit(snap_lines[:pos] + method + snap_lines[pos:])
    return FineHistory(base=base, beads=tuple(beads), origin={"source": "random-java", "format": "test"})


# --- random annotated beads (clustering material) -----------------------------


def random_annotated_beads(rng: random.Random, n: int) -> list[ChangeBead]:
    classes = ["A", "B", "C", None]
    methods = ["A.m()", "A.n()", "B.p()", None]
    beads = []
    ts = rng.randrange(1_000_000)
    for seq in range(n):
        ts += rng.randrange(0, 400)
        cls = rng.choice(classes)
        mth = rng.choice(methods) if cls is not None else None
        beads.append(
            ChangeBead(
                id=f"b{seq}",
                seq=seq,
                ts=ts,
                hunks=(Hunk(file="X.java", start=1, inserted=("x\n",)),),
                enclosing_class=cls,
                enclosing_method=mth,
            )
        )
    return beads


def random_config(rng: random.Random) -> DistanceConfig:
    return DistanceConfig(
        alpha_time=rng.uniform(-1, 1),
        alpha_entries=rng.uniform(-1, 1),
        alpha_same_class=rng.uniform(-1, 1),
        alpha_same_method=rng.uniform(-1, 1),
        time_cap=rng.uniform(1, 600),
        entries_cap=rng.uniform(1, 30),
        theta=rng.uniform(-0.5, 1.5),
    )
