/** Static session payload mirroring the packaged demo history. */

import type { DiffLine, SessionState } from "../src/api.js";

const T0 = 1_700_000_000;
const OFFSETS = [0, 400, 430, 460, 900, 930, 1400, 1430];
const LANES = [0, 0, 0, 0, 0, 1, 2, 3];
const CLUSTER_OF = ["c1", "c2", "c2", "c2", "c3", "c3", "c4", "c4"];
const COLORS: Record<string, string> = {
  c1: "#e41a1c",
  c2: "#377eb8",
  c3: "#4daf4a",
  c4: "#984ea3",
};

export function demoSession(): SessionState {
  const beads = OFFSETS.map((off, i) => ({
    id: `b${i}`,
    seq: i,
    ts: T0 + off,
    x: T0 + off,
    y: LANES[i],
    lane_label: ["StateMachine.foo(int input)", "StateMachine.bar(int a, int b)", "StateMachine.run(int[] inputs)", "StateMachine.transit(int input)"][LANES[i]],
    cluster_id: CLUSTER_OF[i],
    file: "StateMachine.java",
    enclosing_class: "StateMachine",
    enclosing_method: null,
  }));
  const clusters = ["c1", "c2", "c3", "c4"].map((id) => ({
    id,
    color: COLORS[id],
    bead_ids: beads.filter((b) => b.cluster_id === id).map((b) => b.id),
  }));
  return { revision: 0, beads, clusters };
}

export function demoDiffLines(): DiffLine[] {
  return [
    { kind: "context", text: "    public void foo(int input) {\n", file: "StateMachine.java", owner: null, owner_bead: null, old_line: 1, new_line: 1 },
    { kind: "added", text: '        System.out.println("state: " + state);\n', file: "StateMachine.java", owner: "c1", owner_bead: "b0", old_line: null, new_line: 2 },
    { kind: "context", text: "        if (input > 0) {\n", file: "StateMachine.java", owner: null, owner_bead: null, old_line: 2, new_line: 3 },
    { kind: "removed", text: "            bar(input, 0);\n", file: "StateMachine.java", owner: "c2", owner_bead: "b2", old_line: 3, new_line: null },
    { kind: "added", text: "            bar(input, 1);\n", file: "StateMachine.java", owner: "c2", owner_bead: "b2", old_line: null, new_line: 4 },
    { kind: "added", text: '            System.out.println("state: " + state);\n', file: "StateMachine.java", owner: "c2", owner_bead: "b1", old_line: null, new_line: 5 },
    { kind: "context", text: "        }\n", file: "StateMachine.java", owner: null, owner_bead: null, old_line: 4, new_line: 6 },
  ];
}
