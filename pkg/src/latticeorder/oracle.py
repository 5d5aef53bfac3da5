"""Brute-force persistence for small clouds: an independent check on the engine.

Deliberately shares no machinery with the persistence module: its own distance
computation, its own ordering, and the full O(m^3) matrix reduction over every
simplex with no truncation, no clearing and no shortcuts. Slow and simple.
"""

import math

import numpy as np

from .errors import InternalConsistencyError, SizeGuardError
from .lattice import PointCloud
from .persistence import PersistenceDiagram

#: combinatorial blowup guard: C(16,3) triangles is still comfortable
MAX_ORACLE_POINTS = 16


def _points(cloud: PointCloud) -> list[tuple[float, float]]:
    return [(float(x), float(y)) for x, y in cloud.xy]


def _dist(p, q) -> float:
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return math.sqrt(dx * dx + dy * dy)


def naive_persistence(cloud: PointCloud) -> PersistenceDiagram:
    """Reduce the complete (untruncated) filtration the textbook way."""
    pts = _points(cloud)
    n = len(pts)
    if n > MAX_ORACLE_POINTS:
        raise SizeGuardError(f"oracle accepts at most {MAX_ORACLE_POINTS} points, got {n}")

    simplices: list[tuple[float, tuple[int, ...]]] = [(0.0, (i,)) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            simplices.append((_dist(pts[i], pts[j]), (i, j)))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                value = max(_dist(pts[i], pts[j]), _dist(pts[i], pts[k]), _dist(pts[j], pts[k]))
                simplices.append((value, (i, j, k)))
    simplices.sort(key=lambda s: (s[0], len(s[1]), s[1]))

    index = {verts: pos for pos, (_, verts) in enumerate(simplices)}
    columns: list[set] = []
    for value, verts in simplices:
        if len(verts) == 1:
            columns.append(set())
        elif len(verts) == 2:
            columns.append({index[(verts[0],)], index[(verts[1],)]})
        else:
            a, b, c = verts
            columns.append({index[(a, b)], index[(a, c)], index[(b, c)]})

    low_to_col: dict[int, int] = {}
    for j in range(len(columns)):
        col = columns[j]
        while col:
            low = max(col)
            k = low_to_col.get(low)
            if k is None:
                low_to_col[low] = j
                break
            col ^= columns[k]

    h0_deaths = []
    h1 = []
    paired = set()
    for low, j in low_to_col.items():
        paired.add(low)
        paired.add(j)
        birth_value, birth_verts = simplices[low]
        death_value, _ = simplices[j]
        if death_value <= birth_value:
            continue  # zero-persistence pairs are dropped
        if len(birth_verts) == 1:
            h0_deaths.append(death_value)
        elif len(birth_verts) == 2:
            h1.append((birth_value, death_value))

    essential_h0 = 0
    for pos, (_, verts) in enumerate(simplices):
        if pos in paired:
            continue
        if len(verts) == 1:
            essential_h0 += 1
        elif len(verts) == 2:
            raise InternalConsistencyError("essential 1-cycle in a complete complex")
    if essential_h0 != 1:
        raise InternalConsistencyError(f"{essential_h0} essential components, expected 1")

    return PersistenceDiagram(
        h0_deaths=np.asarray(h0_deaths, dtype=np.float64),
        h1=np.asarray(h1, dtype=np.float64).reshape(-1, 2),
        infinite_h0_count=1,
        threshold_used=math.inf,
    )


def components_at_threshold(cloud: PointCloud, t: float) -> int:
    """Component count of the graph with edges {d(i,j) <= t}, by plain search."""
    pts = _points(cloud)
    n = len(pts)
    adjacency = [[j for j in range(n) if j != i and _dist(pts[i], pts[j]) <= t] for i in range(n)]
    seen = [False] * n
    count = 0
    for start in range(n):
        if seen[start]:
            continue
        count += 1
        stack = [start]
        seen[start] = True
        while stack:
            node = stack.pop()
            for nb in adjacency[node]:
                if not seen[nb]:
                    seen[nb] = True
                    stack.append(nb)
    return count
