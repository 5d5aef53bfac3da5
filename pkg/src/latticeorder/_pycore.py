"""Pure-Python kernel twin of the compiled extension module.

Same algorithms, same bit-identical outputs as latticeorder._core; selected at
import time when the extension is not built. Vectorized where numpy helps, but
the reduction loop is honest Python, so large clouds are much slower here (see
benchmarks/bench_backends.py).
"""

import heapq

import numpy as np


def _merge_edges(ei, ej, n):
    """Boolean mask of the edges that merge components (Kruskal order)."""
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]  # path halving
            a = parent[a]
        return a

    merges = np.zeros(len(ei), dtype=bool)
    for pos, (i, j) in enumerate(zip(ei.tolist(), ej.tolist())):
        ri = find(i)
        rj = find(j)
        if ri != rj:
            parent[ri] = rj
            merges[pos] = True
    return merges


def mst_deaths(ei, ej, ew, n):
    """Kruskal over edges pre-sorted by filtration order.

    Returns (deaths, n_components): the merge-edge weights in ascending
    filtration order and the number of components left at the threshold.
    """
    merges = _merge_edges(ei, ej, n)
    deaths = np.ascontiguousarray(ew[merges], dtype=np.float64)
    return deaths, n - len(deaths)


def _canonical(column):
    """Sorted mod-2 support of a generator list (even multiplicities cancel)."""
    column.sort()
    out = []
    k = 0
    m = len(column)
    while k < m:
        run = k + 1
        while run < m and column[run] == column[k]:
            run += 1
        if (run - k) & 1:
            out.append(column[k])
        k = run
    return out


def h1_pairs(dist, ei, ej, ew, threshold):
    """Dimension-1 Rips persistence pairs via anti-transpose reduction.

    Edge columns are processed in reverse filtration order; a column holds the
    edge's triangle cofacets keyed by (filtration value, lexicographic rank).
    Component-merging edges never pair with a triangle, so they are cleared
    without reduction. For each claimed pivot only the canonical list of
    generating edge positions is kept, and colliding columns are rebuilt by
    re-enumerating cofacets, keeping memory linear in the edge count.
    Zero-persistence pairs are dropped.

    Returns (births, deaths, n_zero_columns). The zero-column count lets the
    caller verify that every 1-cycle is paired at a full threshold.
    """
    n = dist.shape[0]
    n_edges = len(ew)
    ei_l = ei.tolist()
    ej_l = ej.tolist()
    ew_l = ew.tolist()
    all_idx = np.arange(n)
    cleared = _merge_edges(ei, ej, n)
    claimed = {}  # triangle rank -> canonical list of generating edge positions
    births = []
    deaths = []
    zero_cols = int(cleared.sum())

    def cofacet_entries(pos):
        a = ei_l[pos]
        b = ej_l[pos]
        da = dist[a]
        db = dist[b]
        mask = (da <= threshold) & (db <= threshold)
        mask[a] = False
        mask[b] = False
        ks = all_idx[mask]
        if not len(ks):
            return []
        values = np.maximum(ew_l[pos], np.maximum(da[ks], db[ks]))
        x = np.minimum(ks, a)
        z = np.maximum(ks, b)
        y = a + b + ks - x - z
        ranks = (x * n + y) * n + z
        return list(zip(values.tolist(), ranks.tolist()))

    for pos in range(n_edges - 1, -1, -1):
        if cleared[pos]:
            continue
        heap = cofacet_entries(pos)
        heapq.heapify(heap)
        column = [pos]
        w = ew_l[pos]
        while True:
            # pop the minimum entry, cancelling mod-2 duplicates
            pivot = None
            while heap:
                v, r = heapq.heappop(heap)
                count = 1
                while heap and heap[0][1] == r:
                    heapq.heappop(heap)
                    count += 1
                if count & 1:
                    pivot = (v, r)
                    break
            if pivot is None:
                zero_cols += 1  # essential 1-cycle at a truncated threshold
                break
            pv, pr = pivot
            hit = claimed.get(pr)
            if hit is None:
                claimed[pr] = _canonical(column)
                if pv != w:  # cofacet value == edge value means zero persistence
                    births.append(w)
                    deaths.append(pv)
                break
            # pivot collision: add the stored column (sum of edge coboundaries)
            heapq.heappush(heap, pivot)
            for f in hit:
                for entry in cofacet_entries(f):
                    heapq.heappush(heap, entry)
            column.extend(hit)

    return (
        np.asarray(births, dtype=np.float64),
        np.asarray(deaths, dtype=np.float64),
        zero_cols,
    )
