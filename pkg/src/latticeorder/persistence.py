"""Vietoris-Rips persistence of 2D point clouds under the Euclidean filtration.

Convention: a simplex enters the filtration when the pairwise distance among
its vertices reaches the connectivity parameter (edge at d(i,j), triangle at
its longest edge). 0D deaths are the minimum-spanning-tree edge weights; 1D
pairs come from GF(2) column reduction. Zero-persistence pairs are dropped.

compute_persistence is the engine entry point and runs on the selected kernel
backend; compute_h1 reduces an explicit filtration (built by
build_rips_filtration) the textbook way and exists as the slow, literal
reference for the same pairing.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .errors import (
    InternalConsistencyError,
    InvalidSpecError,
    InvalidThresholdError,
)
from .lattice import PointCloud


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric Euclidean distance matrix with zero diagonal.

    Stored as the full (n, n) float64 array so kernels get O(1) lookups; the
    upper triangle is available via `.condensed`.
    """

    full: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(np.asarray(self.full, dtype=np.float64))
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidSpecError(f"distance matrix must be square, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidSpecError("distance matrix has non-finite entries")
        if np.any(np.diag(m) != 0.0):
            raise InvalidSpecError("distance matrix diagonal must be zero")
        if not np.array_equal(m, m.T):
            raise InvalidSpecError("distance matrix must be symmetric")
        object.__setattr__(self, "full", m)

    @property
    def n(self) -> int:
        return self.full.shape[0]

    @property
    def condensed(self) -> np.ndarray:
        iu, ju = np.triu_indices(self.n, k=1)
        return self.full[iu, ju]


@dataclass(frozen=True)
class PersistencePair:
    """(birth, death) of one feature; death is +inf only for the essential 0D bar."""

    dim: int
    birth: float
    death: float

    def __post_init__(self):
        if self.dim not in (0, 1):
            raise InvalidSpecError(f"pair dimension must be 0 or 1, got {self.dim}")
        if self.dim == 0 and self.birth != 0.0:
            raise InvalidSpecError("0D pairs are born at 0")
        if self.dim == 1 and not (self.birth > 0.0 and math.isfinite(self.death)):
            raise InvalidSpecError("1D pairs need birth > 0 and a finite death")
        if self.death < self.birth:
            raise InvalidSpecError("death must be >= birth")

    @property
    def lifetime(self) -> float:
        return self.death - self.birth


@dataclass(frozen=True, eq=False)
class PersistenceDiagram:
    """0D/1D diagram: finite 0D deaths, (birth, death) 1D pairs, essential count.

    Arrays are canonicalized (ascending / lexicographic) so two diagrams are
    equal as multisets iff their arrays compare equal.
    """

    h0_deaths: np.ndarray
    h1: np.ndarray
    infinite_h0_count: int
    threshold_used: float

    def __post_init__(self):
        h0 = np.sort(np.asarray(self.h0_deaths, dtype=np.float64))
        h1 = np.asarray(self.h1, dtype=np.float64).reshape(-1, 2)
        h1 = h1[np.lexsort((h1[:, 1], h1[:, 0]))]
        if h0.size and not (np.all(np.isfinite(h0)) and np.all(h0 > 0.0)):
            raise InvalidSpecError("0D deaths must be finite and positive")
        if h1.size and not (
            np.all(np.isfinite(h1)) and np.all(h1[:, 0] > 0.0) and np.all(h1[:, 1] > h1[:, 0])
        ):
            raise InvalidSpecError("1D pairs must satisfy 0 < birth < death < inf")
        if self.infinite_h0_count < 1:
            raise InvalidSpecError("a nonempty cloud has at least one essential 0D bar")
        object.__setattr__(self, "h0_deaths", h0)
        object.__setattr__(self, "h1", h1)

    @property
    def n_points(self) -> int:
        # merges + surviving components = points, at any threshold
        return len(self.h0_deaths) + self.infinite_h0_count

    @property
    def h1_lifetimes(self) -> np.ndarray:
        return self.h1[:, 1] - self.h1[:, 0]

    def pairs(self) -> list[PersistencePair]:
        out = [PersistencePair(0, 0.0, float(d)) for d in self.h0_deaths]
        out += [PersistencePair(0, 0.0, math.inf) for _ in range(self.infinite_h0_count)]
        out += [PersistencePair(1, float(b), float(d)) for b, d in self.h1]
        return out


def same_diagram(a: PersistenceDiagram, b: PersistenceDiagram) -> bool:
    """Multiset equality of finite pairs plus essential counts (thresholds ignored)."""
    return (
        a.infinite_h0_count == b.infinite_h0_count
        and np.array_equal(a.h0_deaths, b.h0_deaths)
        and np.array_equal(a.h1, b.h1)
    )


@dataclass(frozen=True)
class Filtration:
    """Explicit ordered simplex list: (value, vertex tuple), faces first.

    Sorted by (value, dimension, lexicographic vertex tuple), the fixed
    tie-break that makes runs bit-reproducible.
    """

    simplices: list = field(default_factory=list)
    threshold: float = 0.0
    n_points: int = 0

    def __iter__(self):
        return iter(self.simplices)

    def __len__(self):
        return len(self.simplices)


# ---------------------------------------------------------------------------
# operations


def pairwise_distances(cloud: PointCloud) -> DistanceMatrix:
    """Exact Euclidean metric, computed as sqrt(dx^2 + dy^2) in doubles."""
    xy = cloud.xy
    diff = xy[:, None, :] - xy[None, :, :]
    full = np.sqrt(diff[..., 0] ** 2 + diff[..., 1] ** 2)
    np.fill_diagonal(full, 0.0)
    return DistanceMatrix(full)


def enclosing_radius(d: DistanceMatrix) -> float:
    """min over points of the farthest distance; Rips is acyclic above it."""
    if d.n == 1:
        return 0.0
    return float(np.min(np.max(d.full, axis=1)))


def _edge_arrays(full: np.ndarray, threshold: float):
    """Edges (i<j, d<=threshold) sorted by (value, i, j): the filtration order."""
    n = full.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    w = full[iu, ju]
    keep = w <= threshold
    iu, ju, w = iu[keep], ju[keep], w[keep]
    order = np.lexsort((ju, iu, w))
    return (
        np.ascontiguousarray(iu[order], dtype=np.int32),
        np.ascontiguousarray(ju[order], dtype=np.int32),
        np.ascontiguousarray(w[order], dtype=np.float64),
    )


def compute_h0(d: DistanceMatrix) -> list[PersistencePair]:
    """0D pairs at the full threshold: MST edge weights plus one essential bar."""
    ei, ej, ew = _edge_arrays(d.full, math.inf)
    deaths, n_comp = kernels.mst_deaths(ei, ej, ew, d.n)
    out = [PersistencePair(0, 0.0, float(w)) for w in deaths if w > 0.0]
    out += [PersistencePair(0, 0.0, math.inf) for _ in range(n_comp)]
    return out


def build_rips_filtration(d: DistanceMatrix, threshold: float) -> Filtration:
    """Explicit Rips filtration up to triangles: every face precedes its cofaces."""
    if threshold < 0:
        raise InvalidThresholdError(f"threshold must be >= 0, got {threshold!r}")
    n = d.n
    full = d.full
    simplices = [(0.0, (i,)) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w = full[i, j]
            if w <= threshold:
                simplices.append((float(w), (i, j)))
    for i in range(n):
        for j in range(i + 1, n):
            dij = full[i, j]
            if dij > threshold:
                continue
            for k in range(j + 1, n):
                dik = full[i, k]
                if dik > threshold:
                    continue
                djk = full[j, k]
                if djk > threshold:
                    continue
                simplices.append((float(max(dij, dik, djk)), (i, j, k)))
    simplices.sort(key=lambda s: (s[0], len(s[1]), s[1]))
    return Filtration(simplices=simplices, threshold=float(threshold), n_points=n)


def compute_h1(filtration: Filtration) -> list[PersistencePair]:
    """Textbook GF(2) column reduction of the boundary matrix in filtration order.

    Only triangle columns are reduced (their rows are edges; vertex rows never
    interact). Pairs with birth == death are discarded; output is sorted by
    (birth, death). Pairs are complete up to the filtration threshold; 1-cycles
    still open at the threshold are not reported.
    """
    edge_index: dict = {}
    edge_value: dict = {}
    low_to_col: dict = {}
    pairs = []
    for idx, (value, verts) in enumerate(filtration):
        if len(verts) == 2:
            edge_index[verts] = idx
            edge_value[idx] = value
        elif len(verts) == 3:
            a, b, c = verts
            try:
                col = {edge_index[(a, b)], edge_index[(a, c)], edge_index[(b, c)]}
            except KeyError as exc:
                raise InternalConsistencyError(
                    f"triangle {verts} entered the filtration before edge {exc}"
                ) from None
            while col:
                low = max(col)
                other = low_to_col.get(low)
                if other is None:
                    break
                col ^= other
            if col:
                low = max(col)
                low_to_col[low] = col
                birth = edge_value[low]
                if value > birth:
                    pairs.append(PersistencePair(1, birth, float(value)))
    pairs.sort(key=lambda p: (p.birth, p.death))
    return pairs


def compute_persistence(cloud: PointCloud, threshold: float | None = None) -> PersistenceDiagram:
    """Full 0D/1D diagram of a cloud; threshold defaults to the enclosing radius.

    At a threshold below the enclosing radius the 0D part reports every
    surviving component as essential and the 1D part lists only the pairs
    completed by the threshold.
    """
    d = pairwise_distances(cloud)
    radius = enclosing_radius(d)
    t = radius if threshold is None else float(threshold)
    if t < 0:
        raise InvalidThresholdError(f"threshold must be >= 0, got {t!r}")
    n = d.n
    ei, ej, ew = _edge_arrays(d.full, t)
    deaths, n_comp = kernels.mst_deaths(ei, ej, ew, n)
    births, h1_deaths, zero_cols = kernels.h1_pairs(d.full, ei, ej, ew, t)
    unpaired = zero_cols - (n - n_comp)
    if unpaired < 0 or (t >= radius and unpaired > 0):
        raise InternalConsistencyError(
            f"{unpaired} unpaired 1-cycles at threshold {t} (enclosing radius {radius})"
        )
    h1 = np.column_stack([births, h1_deaths]) if len(births) else np.empty((0, 2))
    return PersistenceDiagram(
        h0_deaths=deaths[deaths > 0.0],
        h1=h1,
        infinite_h0_count=int(n_comp),
        threshold_used=t,
    )
