import itertools
import json
import random

import numpy as np
import pytest

from cbt import _kernels
from cbt.cluster import (
    DistanceConfig,
    cluster_beads,
    distance,
    entries_distance,
    initial_clusters,
    same_class,
    same_method,
    time_distance,
)
from cbt.ingest import FineHistory
from cbt.model import ChangeBead, Hunk, PALETTE

from conftest import random_annotated_beads, random_config

WORKED_CFG = DistanceConfig(
    alpha_time=0.4,
    alpha_entries=0.2,
    alpha_same_class=-0.2,
    alpha_same_method=-0.4,
    time_cap=300.0,
    entries_cap=20.0,
    theta=0.2,
)


def mk(seq, ts, cls=None, mth=None):
    return ChangeBead(
        id=f"b{seq}",
        seq=seq,
        ts=ts,
        hunks=(Hunk(file="X.java", start=1, inserted=("x\n",)),),
        enclosing_class=cls,
        enclosing_method=mth,
    )


def oracle_partition(beads, cfg):
    """Transitive closure of {distance < theta} by boolean matrix squaring."""
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
    return sorted(groups.values())


class TestMetrics:
    def test_time_distance(self):
        assert time_distance(mk(0, 100), mk(1, 130)) == 30

    def test_time_distance_self(self):
        b = mk(0, 100)
        assert time_distance(b, b) == 0

    def test_time_symmetry_random(self):
        rng = random.Random(0)
        for _ in range(1000):
            a, b = mk(0, rng.randrange(10**6)), mk(1, rng.randrange(10**6))
            assert time_distance(a, b) == time_distance(b, a)

    def test_entries_adjacent(self):
        assert entries_distance(mk(3, 0), mk(4, 0)) == 0

    def test_entries_spread(self):
        assert entries_distance(mk(1, 0), mk(5, 0)) == 3

    def test_entries_self(self):
        b = mk(2, 0)
        assert entries_distance(b, b) == 0

    def test_entries_symmetry_random(self):
        rng = random.Random(1)
        for _ in range(1000):
            a, b = mk(rng.randrange(100), 0), mk(rng.randrange(100), 0)
            assert entries_distance(a, b) == entries_distance(b, a)

    def test_same_class(self):
        assert same_class(mk(0, 0, "StateMachine"), mk(1, 0, "StateMachine")) == 1
        assert same_class(mk(0, 0, None), mk(1, 0, "A")) == 0
        assert same_class(mk(0, 0, "A"), mk(1, 0, "B")) == 0
        b = mk(0, 0, "A")
        assert same_class(b, b) == 1

    def test_same_method(self):
        assert same_method(mk(0, 0, "A", "A.m()"), mk(1, 0, "A", "A.m()")) == 1
        assert same_method(mk(0, 0, "A", "A.m()"), mk(1, 0, "A", "A.n()")) == 0
        assert same_method(mk(0, 0, "A", "A.m()"), mk(1, 0, "A", None)) == 0


class TestDistance:
    def test_worked_value(self):
        a = mk(0, 1000, "A", "A.m()")
        b = mk(1, 1005, "A", "A.m()")
        want = 0.4 * (5 / 300) + 0.2 * 0.0 - 0.2 - 0.4
        assert abs(distance(a, b, WORKED_CFG) - want) < 1e-12
        assert abs(distance(a, b, WORKED_CFG) - (-0.59333333333333333)) < 1e-12

    def test_all_zero_weights(self):
        cfg = DistanceConfig(
            alpha_time=0, alpha_entries=0, alpha_same_class=0, alpha_same_method=0,
            time_cap=300, entries_cap=20, theta=0.2,
        )
        rng = random.Random(2)
        for _ in range(50):
            a = mk(rng.randrange(50), rng.randrange(10**6), "A", "A.m()")
            b = mk(rng.randrange(50), rng.randrange(10**6), "B")
            assert distance(a, b, cfg) == 0.0

    def test_saturation_value(self):
        a = mk(0, 0, "A", "A.m()")
        b = mk(30, 10_000, "B", "B.n()")
        assert abs(distance(a, b, WORKED_CFG) - 0.6) < 1e-12

    def test_self_distance(self):
        b = mk(0, 50, "A", "A.m()")
        assert distance(b, b, WORKED_CFG) == WORKED_CFG.alpha_same_class + WORKED_CFG.alpha_same_method

    def test_symmetry_exact(self):
        rng = random.Random(3)
        for _ in range(500):
            cfg = random_config(rng)
            beads = random_annotated_beads(rng, 2)
            assert distance(beads[0], beads[1], cfg) == distance(beads[1], beads[0], cfg)


class TestInitialClusters:
    def test_theta_below_everything_gives_singletons(self):
        beads = random_annotated_beads(random.Random(4), 8)
        cfg = DistanceConfig(theta=-10.0)
        groups = cluster_beads(beads, cfg)
        assert [len(g) for g in groups] == [1] * 8

    def test_transitive_chain(self):
        # d(1,2) < theta, d(2,3) < theta, d(1,3) >= theta -> one cluster
        cfg = DistanceConfig(
            alpha_time=1.0, alpha_entries=0.0, alpha_same_class=0.0,
            alpha_same_method=0.0, time_cap=100.0, entries_cap=20.0, theta=0.5,
        )
        beads = [mk(0, 0), mk(1, 40), mk(2, 80)]
        assert distance(beads[0], beads[1], cfg) < cfg.theta
        assert distance(beads[1], beads[2], cfg) < cfg.theta
        assert distance(beads[0], beads[2], cfg) >= cfg.theta
        groups = cluster_beads(beads, cfg)
        assert len(groups) == 1

    def test_strict_threshold(self):
        cfg = DistanceConfig(
            alpha_time=1.0, alpha_entries=0.0, alpha_same_class=0.0,
            alpha_same_method=0.0, time_cap=100.0, entries_cap=20.0, theta=0.5,
        )
        beads = [mk(0, 0), mk(1, 50)]  # distance exactly 0.5
        assert distance(beads[0], beads[1], cfg) == cfg.theta
        assert len(cluster_beads(beads, cfg)) == 2

    def test_fig1_partition_and_colors(self, fig1, default_cfg):
        part = initial_clusters(fig1, default_cfg)
        got = [[int(b[1:]) + 1 for b in c.bead_ids] for c in part.clusters]
        assert got == [[1], [2, 3, 4], [5, 6], [7, 8]]
        assert [c.color for c in part.clusters] == list(PALETTE[:4])
        assert [c.id for c in part.clusters] == ["c1", "c2", "c3", "c4"]

    def test_oracle_equivalence(self):
        rng = random.Random(6)
        for trial in range(150):
            beads = random_annotated_beads(rng, rng.randrange(1, 21))
            cfg = random_config(rng)
            got = sorted(sorted(b.id for b in g) for g in cluster_beads(beads, cfg))
            want = sorted(sorted(ids) for ids in oracle_partition(beads, cfg))
            assert got == want, f"trial {trial}"

    def test_theta_monotonicity(self):
        rng = random.Random(8)
        for _ in range(30):
            beads = random_annotated_beads(rng, rng.randrange(2, 16))
            base = random_config(rng)
            thetas = sorted(rng.uniform(-1, 1.5) for _ in range(6))
            counts = []
            for theta in thetas:
                cfg = DistanceConfig(**{**base.to_json(), "theta": theta})
                counts.append(len(cluster_beads(beads, cfg)))
            assert counts == sorted(counts, reverse=True)

    def test_backend_paths_agree(self):
        rng = random.Random(9)
        for _ in range(50):
            beads = random_annotated_beads(rng, rng.randrange(1, 25))
            cfg = random_config(rng)
            args = (
                np.array([b.ts for b in beads], np.int64),
                np.array([b.seq for b in beads], np.int64),
            )
            from cbt.cluster import _intern_optional

            cls_id = _intern_optional([b.enclosing_class for b in beads])
            mth_id = _intern_optional([b.enclosing_method for b in beads])
            params = (
                cfg.alpha_time, cfg.alpha_entries, cfg.alpha_same_class,
                cfg.alpha_same_method, cfg.time_cap, cfg.entries_cap, cfg.theta,
            )
            la = _kernels._component_labels_loop(*args, cls_id, mth_id, *params)
            lb = _kernels._component_labels_numpy(*args, cls_id, mth_id, *params)

            def groups(labels):
                out = {}
                for i, l in enumerate(labels.tolist()):
                    out.setdefault(l, []).append(i)
                return sorted(out.values())

            assert groups(la) == groups(lb)


class TestConfig:
    def test_defaults_frozen(self, default_cfg):
        assert default_cfg.to_json() == {
            "alpha_time": 1.0,
            "alpha_entries": 0.2,
            "alpha_same_class": -0.2,
            "alpha_same_method": -0.4,
            "time_cap": 300.0,
            "entries_cap": 20.0,
            "theta": 0.2,
        }

    def test_from_file(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({"theta": 0.7, "alpha_time": 0.1}))
        cfg = DistanceConfig.from_file(p)
        assert cfg.theta == 0.7
        assert cfg.alpha_time == 0.1
        assert cfg.entries_cap == 20.0

    def test_unknown_field_rejected(self):
        with pytest.raises(ValueError, match="unknown config fields"):
            DistanceConfig.from_dict({"thata": 0.1})

    def test_invalid_caps_rejected(self):
        with pytest.raises(ValueError):
            DistanceConfig(time_cap=0)
        with pytest.raises(ValueError):
            DistanceConfig(entries_cap=-1)
        with pytest.raises(ValueError):
            DistanceConfig(theta=float("nan"))
