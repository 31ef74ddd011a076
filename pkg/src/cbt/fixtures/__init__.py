"""Reference scenario shipped with the package.

A small state-machine class edited eight times: two logging insertions,
two call-parameter fixes, and two method renames (declaration + call
sites). The timestamps are laid out so the default config clusters the
history into {1}, {2,3,4}, {5,6}, {7,8} (1-based change numbers), which a
user then tailors into {1,2}, {3,4}, {5,7}, {6,8}.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..ingest import FineHistory, ingest_change_log, write_change_log
from ..model import ChangeBead, Snapshot
from ..textdiff import diff_texts

FIG1_FILE = "StateMachine.java"
FIG1_T0 = 1_700_000_000
# 30 s inside a work burst, well past the 300 s cap between bursts
FIG1_OFFSETS = (0, 400, 430, 460, 900, 930, 1400, 1430)

# Initial clusters the default config must produce, and the partition the
# scripted tailoring session ends at (1-based change numbers).
FIG1_INITIAL = ((1,), (2, 3, 4), (5, 6), (7, 8))
FIG1_TAILORED = ((1, 2), (3, 4), (5, 7), (6, 8))

_BASE = """\
public class StateMachine {

    private int state;

    public StateMachine(int initial) {
        state = initial;
    }

    public void run(int[] inputs) {
        for (int input : inputs) {
            foo(input);
        }
    }

    public void foo(int input) {
        if (input > 0) {
            bar(input, 0);
        } else {
            bar(input, 0);
        }
    }

    private void bar(int a, int b) {
        state = a + b;
    }
}
"""

_LOG_OUTER = '        System.out.println("state: " + state);'
_LOG_INNER = '            System.out.println("state: " + state);'

# (kind, line, payload) against the file state at that moment; 1-based lines
_EDITS = (
    ("insert", 16, _LOG_OUTER),  # 1: log at top of foo
    ("insert", 19, _LOG_INNER),  # 2: log after the first bar call
    ("replace", 18, "            bar(input, 1);"),  # 3: fix first call parameter
    ("replace", 21, "            bar(input, -1);"),  # 4: fix second call parameter
    ("replace", 15, "    public void transit(int input) {"),  # 5: rename foo declaration
    ("replace", 25, "    private void nextState(int a, int b) {"),  # 6: rename bar declaration
    ("replace", 11, "            transit(input);"),  # 7: rename call site in run
    ("replace2", (18, 21), ("            nextState(input, 1);", "            nextState(input, -1);")),  # 8
)


def fig1_file_states() -> list[str]:
    """The nine file states: base plus one per change."""
    states = [_BASE]
    lines = _BASE.split("\n")[:-1]
    for kind, where, payload in _EDITS:
        if kind == "insert":
            lines.insert(where - 1, payload)
        elif kind == "replace":
            lines[where - 1] = payload
        else:
            for ln, text in zip(where, payload):
                lines[ln - 1] = text
        states.append("\n".join(lines) + "\n")
    return states


def fig1_history() -> FineHistory:
    """The scenario as an in-memory history (ids b0..b7)."""
    states = fig1_file_states()
    beads = []
    for k in range(len(_EDITS)):
        hunks = diff_texts(states[k], states[k + 1], FIG1_FILE)
        beads.append(
            ChangeBead(
                id=f"b{k}",
                seq=k,
                ts=FIG1_T0 + FIG1_OFFSETS[k],
                hunks=tuple(hunks),
            )
        )
    return FineHistory(
        base=Snapshot({FIG1_FILE: states[0]}),
        beads=tuple(beads),
        origin={"source": "fig1", "format": "builtin"},
    )


def fig1_path() -> Path:
    """Filesystem path of the packaged fig1.cbl."""
    return Path(resources.files(__package__) / "fig1.cbl")


def write_fig1(path: str | Path) -> None:
    write_change_log(fig1_history(), path)


def load_fig1() -> FineHistory:
    return ingest_change_log(fig1_path())
