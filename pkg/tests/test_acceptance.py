"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import itertools
import random
import subprocess
import threading
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

from cbt.cluster import DistanceConfig, cluster_beads, distance, initial_clusters
from cbt.errors import CyclicClusterDependency, SelectionPatchConflict
from cbt.export import export_git, plan_export
from cbt.fixtures import FIG1_TAILORED, fig1_path
from cbt.ingest import FineHistory
from cbt.model import ChangeBead, Hunk, Snapshot, apply_hunks
from cbt.pipeline import analyze
from cbt.preprocess import squash_unparseable
from cbt.session import ClusterSession
from cbt.structure import parse_structure
from cbt.textdiff import diff_texts

from conftest import (
    random_annotated_beads,
    random_config,
    random_java_history,
    random_text,
    random_text_history,
)
from test_export import partition_of, random_partition, read_tree


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"[ACCEPTANCE] FAIL {name}")
        raise
    print(f"[ACCEPTANCE] PASS {name}")


def change_numbers(partition):
    return [[int(b[1:]) + 1 for b in c.bead_ids] for c in partition.clusters]


def test_fig1_golden_scenario(tmp_path):
    """End-to-end reference scenario under the frozen default config, < 5 s."""
    with criterion("fig1 golden scenario (end-to-end, < 5 s)"):
        start = time.perf_counter()

        analysis = analyze(fig1_path(), DistanceConfig())
        assert change_numbers(analysis.partition) == [[1], [2, 3, 4], [5, 6], [7, 8]]

        s = ClusterSession(analysis.history, analysis.partition)
        by_beads = {c.bead_ids: c.id for c in s.partition.clusters}
        c1, c2 = by_beads[("b0",)], by_beads[("b1", "b2", "b3")]
        c3, c4 = by_beads[("b4", "b5")], by_beads[("b6", "b7")]
        n1 = s.split_cluster(c2, ["b1"])  # split({2,3,4},{2})
        s.merge_clusters([c1, n1])  # merge({1},{2})
        n2 = s.split_cluster(c3, ["b5"])  # split({5,6},{6})
        n3 = s.split_cluster(c4, ["b7"])  # split({7,8},{8})
        s.merge_clusters([c3, c4])  # merge({5},{7})
        s.merge_clusters([n2, n3])  # merge({6},{8})
        assert tuple(tuple(g) for g in change_numbers(s.partition)) == FIG1_TAILORED

        plan = plan_export(s.history, s.partition)
        out = tmp_path / "untangled"
        commits = export_git(plan, out)
        assert len(commits) == 4
        assert read_tree(out) == dict(s.history.final.files)

        elapsed = time.perf_counter() - start
        assert elapsed < 5.0, f"scenario took {elapsed:.2f} s"


def test_clustering_oracle_equivalence():
    """500 random instances match brute-force transitive closure exactly."""
    with criterion("clustering oracle equivalence (500/500 exact)"):
        rng = random.Random(20_240_501)
        for trial in range(500):
            beads = random_annotated_beads(rng, rng.randrange(1, 21))
            cfg = random_config(rng)
            got = sorted(sorted(b.id for b in g) for g in cluster_beads(beads, cfg))

            n = len(beads)
            adj = np.eye(n, dtype=bool)
            for i, j in itertools.combinations(range(n), 2):
                if distance(beads[i], beads[j], cfg) < cfg.theta:
                    adj[i, j] = adj[j, i] = True
            closure = adj
            while True:
                nxt = closure | (closure @ closure)
                if (nxt == closure).all():
                    break
                closure = nxt
            groups = {}
            for i in range(n):
                root = int(np.nonzero(closure[i])[0][0])
                groups.setdefault(root, []).append(beads[i].id)
            want = sorted(sorted(ids) for ids in groups.values())
            assert got == want, f"trial {trial}: {got} != {want}"


def test_metric_unit_suite():
    """Symmetry plus the worked distance values, within 1e-12."""
    with criterion("metric unit suite (worked values at 1e-12)"):
        cfg = DistanceConfig(
            alpha_time=0.4, alpha_entries=0.2, alpha_same_class=-0.2,
            alpha_same_method=-0.4, time_cap=300.0, entries_cap=20.0, theta=0.2,
        )

        def mk(seq, ts, cls=None, mth=None):
            return ChangeBead(
                id=f"b{seq}", seq=seq, ts=ts,
                hunks=(Hunk(file="X.java", start=1, inserted=("x\n",)),),
                enclosing_class=cls, enclosing_method=mth,
            )

        # close in time, adjacent, same class and method
        a, b = mk(0, 1000, "A", "A.m()"), mk(1, 1005, "A", "A.m()")
        assert abs(distance(a, b, cfg) - (-0.5933333333333333)) < 1e-12

        # all weights zero
        zero = DistanceConfig(
            alpha_time=0.0, alpha_entries=0.0, alpha_same_class=0.0,
            alpha_same_method=0.0, time_cap=300.0, entries_cap=20.0, theta=0.2,
        )
        assert abs(distance(a, b, zero) - 0.0) < 1e-12

        # saturated time and entries, nothing structural in common
        far_a, far_b = mk(0, 0, "A", "A.m()"), mk(30, 10_000, "B", "B.n()")
        assert abs(distance(far_a, far_b, cfg) - 0.6) < 1e-12

        rng = random.Random(7)
        from cbt.cluster import entries_distance, time_distance

        for _ in range(1000):
            x = mk(rng.randrange(100), rng.randrange(10**6))
            y = mk(rng.randrange(100), rng.randrange(10**6))
            assert time_distance(x, y) == time_distance(y, x)
            assert entries_distance(x, y) == entries_distance(y, x)
            c = random_config(rng)
            assert distance(x, y, c) == distance(y, x, c)


def test_threshold_monotonicity():
    """Cluster count is non-increasing along ascending theta grids."""
    with criterion("threshold monotonicity (100 histories)"):
        rng = random.Random(31_337)
        for _ in range(100):
            beads = random_annotated_beads(rng, rng.randrange(2, 18))
            base = random_config(rng).to_json()
            thetas = sorted(rng.uniform(-1.0, 1.5) for _ in range(8))
            counts = [
                len(cluster_beads(beads, DistanceConfig(**{**base, "theta": t})))
                for t in thetas
            ]
            assert counts == sorted(counts, reverse=True)


def test_preprocessor_preservation():
    """200 histories with unparseable windows: final snapshot preserved."""
    with criterion("preprocessor preservation (200 histories, byte-identical)"):
        rng = random.Random(424_242)
        for trial in range(200):
            h = random_java_history(rng, n_edits=rng.randrange(2, 14))
            out, report = squash_unparseable(h)
            assert out.final == h.final, f"trial {trial}"
            for snap in out.snapshots():
                for text in snap.files.values():
                    parse_structure(text)


def test_diff_round_trip_and_attribution():
    """1000 random text pairs round-trip; fig1 attribution covers all diffs."""
    with criterion("diff round-trip (1000 pairs) + attribution coverage"):
        rng = random.Random(9_000)
        for _ in range(1000):
            x, y = random_text(rng), random_text(rng)
            hunks = diff_texts(x, y, "F")
            snap = Snapshot({"F": x} if x else {})
            if hunks:
                bead = ChangeBead(id="t", seq=0, ts=0, hunks=tuple(hunks))
                snap = apply_hunks(snap, bead)
            assert snap.text("F") == y

        analysis = analyze(fig1_path(), DistanceConfig())
        s = ClusterSession(analysis.history, analysis.partition)
        cluster_ids = [c.id for c in s.partition.clusters]
        conflicts = []
        for r in range(1, len(cluster_ids) + 1):
            for combo in itertools.combinations(cluster_ids, r):
                try:
                    diff = s.augmented_diff(list(combo))
                except SelectionPatchConflict as e:
                    conflicts.append((combo, e.seq))
                    continue
                # reconstruct both sides and require exactly-once ownership
                chosen = {b for cid in combo for b in s.partition.cluster(cid).bead_ids}
                beads = [b for b in s.history.beads if b.id in chosen]
                base = s.history.snapshots()[min(b.seq for b in beads)]
                result = base
                for b in beads:
                    result = apply_hunks(result, b)
                old_side = "".join(l.text for l in diff.lines if l.kind in ("context", "removed"))
                new_side = "".join(l.text for l in diff.lines if l.kind in ("context", "added"))
                assert old_side == base.text("StateMachine.java")
                assert new_side == result.text("StateMachine.java")
                for line in diff.lines:
                    assert (line.kind == "context") == (line.owner is None)
                    if line.owner is not None:
                        assert line.owner in combo
        # conflicted selections are those whose beads need skipped effects;
        # in fig1 only the later renames (changes 6..8) are position- or
        # content-dependent on earlier insertions and fixes
        assert conflicts, "fig1 must exhibit at least one conflicting selection"
        for combo, seq in conflicts:
            assert seq in (5, 6, 7)


def test_export_soundness(tmp_path):
    """100 random acyclic partitions export byte-identical trees."""
    with criterion("export soundness (100 partitions + cycle fixture)"):
        rng = random.Random(77_777)
        done = 0
        trial = 0
        while done < 100:
            trial += 1
            h = random_text_history(rng, rng.randrange(2, 8), n_files=2)
            part = partition_of(h, random_partition(rng, len(h.beads)))
            try:
                plan = plan_export(h, part)
            except CyclicClusterDependency:
                continue
            out = tmp_path / f"r{trial}"
            export_git(plan, out)
            assert read_tree(out) == dict(h.final.files), f"trial {trial}"
            # each commit's tree step equals replaying only its own beads
            snap = plan.base
            for commit in plan.commits:
                after = apply_hunks(
                    snap, ChangeBead(id="c", seq=0, ts=0, hunks=commit.hunks)
                )
                check = snap
                for bid in commit.bead_ids:
                    check = apply_hunks(check, h.beads[int(bid[1:])])
                assert after == check, f"trial {trial}: foreign lines in {commit.cluster_id}"
                snap = after
            done += 1

        # adversarial cycle: A deletes B's insertion and vice versa, two files
        base = Snapshot({"A.java": "a\n", "B.java": "b\n"})
        beads = (
            ChangeBead(id="b0", seq=0, ts=1, hunks=(Hunk("A.java", 2, inserted=("ax\n",)),)),
            ChangeBead(id="b1", seq=1, ts=2, hunks=(Hunk("A.java", 2, deleted=("ax\n",)),)),
            ChangeBead(id="b2", seq=2, ts=3, hunks=(Hunk("B.java", 2, inserted=("bx\n",)),)),
            ChangeBead(id="b3", seq=3, ts=4, hunks=(Hunk("B.java", 2, deleted=("bx\n",)),)),
        )
        h = FineHistory(base=base, beads=beads, origin={})
        with pytest.raises(CyclicClusterDependency):
            plan_export(h, partition_of(h, [[0, 3], [1, 2]]))


def test_service_round_trip_neutrality(tmp_path):
    """analyze -> serve (no edits) -> export equals analyze -> export."""
    with criterion("service round-trip neutrality (commit-for-commit)"):
        import httpx

        from cbt.service import SessionService, make_server

        analysis = analyze(fig1_path(), DistanceConfig())
        plan = plan_export(analysis.history, analysis.partition)
        direct = export_git(plan, tmp_path / "direct")

        service = SessionService(analyze(fig1_path(), DistanceConfig()), tmp_path / "in.cbl")
        httpd = make_server(service, 0)
        thread = threading.Thread(target=httpd.serve_forever, daemon=True)
        thread.start()
        try:
            url = f"http://127.0.0.1:{httpd.server_address[1]}"
            assert httpx.get(url + "/api/session").json()["revision"] == 0
            resp = httpx.post(url + "/api/export", json={"out_path": str(tmp_path / "served")})
            assert resp.status_code == 200
            via_service = resp.json()["commits"]
        finally:
            httpd.shutdown()
            httpd.server_close()
        assert via_service == direct
        assert read_tree(tmp_path / "served") == read_tree(tmp_path / "direct")
