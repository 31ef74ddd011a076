"""Numeric kernels: line-diff LCS marking and pairwise-distance clustering.

These two loops dominate runtime (every ingest/squash/export step re-diffs
file texts; clustering is O(N^2) over beads). Each kernel has a numba
``@njit(cache=True)`` path (default when numba imports) and a pure-numpy
fallback:

  * the LCS kernel fallback runs the identical function uncompiled, so
    both paths mark bit-identical masks;
  * the clustering fallback computes the distance matrix vectorized with
    the same per-element IEEE expression, so both paths link exactly the
    same bead pairs (labels may pick different representatives; the
    grouped partition is identical).

``CBT_NUMBA=0`` forces the fallback, ``CBT_NUMBA=1`` requires numba.
numba is imported lazily on first kernel use; its ~5 s import would
otherwise hit every CLI start.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_FLAG = "CBT_NUMBA"


def _lcs_marks(a, b, ma, mb):
    """Mark a maximum common subsequence of int arrays ``a`` and ``b``.

    Sets ma[i]/mb[j] True for matched positions. Linear-space divide and
    conquer: split ``a`` at its midpoint, find the best ``b`` split from a
    forward and a backward DP row, recurse via an explicit range stack
    (depth <= log2 n, so 256 slots never overflow). Ties take the first
    maximum, which makes the marking deterministic.
    """
    total_m = b.shape[0]
    f = np.zeros(total_m + 1, np.int64)
    g = np.zeros(total_m + 1, np.int64)
    stack = np.empty((256, 4), np.int64)
    stack[0, 0] = 0
    stack[0, 1] = a.shape[0]
    stack[0, 2] = 0
    stack[0, 3] = total_m
    sp = 1
    while sp > 0:
        sp -= 1
        lo1 = stack[sp, 0]
        hi1 = stack[sp, 1]
        lo2 = stack[sp, 2]
        hi2 = stack[sp, 3]
        while lo1 < hi1 and lo2 < hi2 and a[lo1] == b[lo2]:
            ma[lo1] = True
            mb[lo2] = True
            lo1 += 1
            lo2 += 1
        while hi1 > lo1 and hi2 > lo2 and a[hi1 - 1] == b[hi2 - 1]:
            ma[hi1 - 1] = True
            mb[hi2 - 1] = True
            hi1 -= 1
            hi2 -= 1
        n = hi1 - lo1
        m = hi2 - lo2
        if n == 0 or m == 0:
            continue
        if n == 1:
            x = a[lo1]
            for j in range(lo2, hi2):
                if b[j] == x:
                    ma[lo1] = True
                    mb[j] = True
                    break
            continue
        if m == 1:
            y = b[lo2]
            for i in range(lo1, hi1):
                if a[i] == y:
                    ma[i] = True
                    mb[lo2] = True
                    break
            continue
        mid = lo1 + n // 2
        # forward row: f[j] = LCS(a[lo1:mid], b[lo2:lo2+j])
        for j in range(m + 1):
            f[j] = 0
        for i in range(lo1, mid):
            prev_old = f[0]
            for j in range(1, m + 1):
                old_j = f[j]
                if a[i] == b[lo2 + j - 1]:
                    v = prev_old + 1
                else:
                    v = f[j] if f[j] >= f[j - 1] else f[j - 1]
                f[j] = v
                prev_old = old_j
        # backward row: g[j] = LCS(a[mid:hi1], b[lo2+j:hi2])
        for j in range(m + 1):
            g[j] = 0
        for i in range(hi1 - 1, mid - 1, -1):
            prev_old = g[m]
            for j in range(m - 1, -1, -1):
                old_j = g[j]
                if a[i] == b[lo2 + j]:
                    v = prev_old + 1
                else:
                    v = g[j] if g[j] >= g[j + 1] else g[j + 1]
                g[j] = v
                prev_old = old_j
        best_j = 0
        best = f[0] + g[0]
        for j in range(1, m + 1):
            s = f[j] + g[j]
            if s > best:
                best = s
                best_j = j
        stack[sp, 0] = mid
        stack[sp, 1] = hi1
        stack[sp, 2] = lo2 + best_j
        stack[sp, 3] = hi2
        sp += 1
        stack[sp, 0] = lo1
        stack[sp, 1] = mid
        stack[sp, 2] = lo2
        stack[sp, 3] = lo2 + best_j
        sp += 1


def _component_labels_loop(ts, seq, cls_id, mth_id, a_time, a_entries, a_class, a_method, t_cap, e_cap, theta):
    """Union-find labels of the strict-threshold distance graph (pair loop).

    The distance expression mirrors cluster.distance() term for term (same
    IEEE evaluation order). Returns root labels per bead.
    """
    n = ts.shape[0]
    parent = np.arange(n)
    for i in range(n):
        for j in range(i + 1, n):
            dt = float(ts[i] - ts[j])
            if dt < 0.0:
                dt = -dt
            if dt > t_cap:
                dt = t_cap
            tn = dt / t_cap
            de = float(seq[j] - seq[i]) if seq[j] >= seq[i] else float(seq[i] - seq[j])
            de -= 1.0
            if de < 0.0:
                de = 0.0
            if de > e_cap:
                de = e_cap
            en = de / e_cap
            sc = 1.0 if (cls_id[i] >= 0 and cls_id[i] == cls_id[j]) else 0.0
            sm = 1.0 if (mth_id[i] >= 0 and mth_id[i] == mth_id[j]) else 0.0
            d = ((a_time * tn + a_entries * en) + a_class * sc) + a_method * sm
            if d < theta:
                ri = i
                while parent[ri] != ri:
                    parent[ri] = parent[parent[ri]]
                    ri = parent[ri]
                rj = j
                while parent[rj] != rj:
                    parent[rj] = parent[parent[rj]]
                    rj = parent[rj]
                if ri < rj:
                    parent[rj] = ri
                elif rj < ri:
                    parent[ri] = rj
    labels = np.empty(n, np.int64)
    for i in range(n):
        r = i
        while parent[r] != r:
            r = parent[r]
        labels[i] = r
    return labels


def distance_matrix(ts, seq, cls_id, mth_id, a_time, a_entries, a_class, a_method, t_cap, e_cap, theta):
    """Vectorized NxN distance matrix; per-element ops match the loop kernel."""
    dt = np.abs(ts[:, None] - ts[None, :]).astype(np.float64)
    tn = np.minimum(dt, t_cap) / t_cap
    de = np.abs(seq[:, None] - seq[None, :]).astype(np.float64) - 1.0
    np.maximum(de, 0.0, out=de)
    en = np.minimum(de, e_cap) / e_cap
    sc = ((cls_id[:, None] == cls_id[None, :]) & (cls_id[:, None] >= 0)).astype(np.float64)
    sm = ((mth_id[:, None] == mth_id[None, :]) & (mth_id[:, None] >= 0)).astype(np.float64)
    return ((a_time * tn + a_entries * en) + a_class * sc) + a_method * sm


def _component_labels_numpy(ts, seq, cls_id, mth_id, a_time, a_entries, a_class, a_method, t_cap, e_cap, theta):
    d = distance_matrix(ts, seq, cls_id, mth_id, a_time, a_entries, a_class, a_method, t_cap, e_cap, theta)
    n = ts.shape[0]
    ii, jj = np.nonzero(np.triu(d < theta, k=1))
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in zip(ii.tolist(), jj.tolist()):
        ri, rj = find(i), find(j)
        if ri != rj:
            if rj < ri:
                ri, rj = rj, ri
            parent[rj] = ri
    return np.array([find(i) for i in range(n)], np.int64)


_resolved: dict[str, object] = {}
_backend: str | None = None


def _resolve_backend() -> str:
    global _backend
    if _backend is None:
        flag = os.environ.get(_ENV_FLAG, "").strip().lower()
        if flag in ("0", "false", "no", "off"):
            _backend = "numpy"
        else:
            try:
                import numba  # noqa: F401

                _backend = "numba"
            except ImportError:
                if flag in ("1", "true", "yes", "on"):
                    raise
                _backend = "numpy"
    return _backend


def backend_name() -> str:
    """Active kernel backend, "numba" or "numpy"."""
    return _resolve_backend()


def _get(name: str):
    fn = _resolved.get(name)
    if fn is None:
        if _resolve_backend() == "numba":
            from numba import njit

            impl = _lcs_marks if name == "lcs" else _component_labels_loop
            fn = njit(cache=True)(impl)
        else:
            fn = _lcs_marks if name == "lcs" else _component_labels_numpy
        _resolved[name] = fn
    return fn


def lcs_marks(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Match masks for int64 line-id arrays ``a``, ``b`` (True = common line)."""
    ma = np.zeros(a.shape[0], np.bool_)
    mb = np.zeros(b.shape[0], np.bool_)
    if a.shape[0] and b.shape[0]:
        _get("lcs")(a, b, ma, mb)
    return ma, mb


def component_labels(
    ts: np.ndarray,
    seq: np.ndarray,
    cls_id: np.ndarray,
    mth_id: np.ndarray,
    a_time: float,
    a_entries: float,
    a_class: float,
    a_method: float,
    t_cap: float,
    e_cap: float,
    theta: float,
) -> np.ndarray:
    """Connected-component root labels of the distance-threshold graph."""
    if ts.shape[0] == 0:
        return np.empty(0, np.int64)
    return _get("components")(
        ts, seq, cls_id, mth_id, a_time, a_entries, a_class, a_method, t_cap, e_cap, theta
    )


def warmup() -> str:
    """Force backend resolution and (for numba) JIT compilation of both kernels."""
    lcs_marks(np.array([1, 2], np.int64), np.array([2, 3], np.int64))
    component_labels(
        np.array([0, 10], np.int64),
        np.array([0, 1], np.int64),
        np.array([0, 0], np.int64),
        np.array([-1, -1], np.int64),
        1.0, 0.2, -0.2, -0.4, 300.0, 20.0, 0.2,
    )
    return backend_name()
