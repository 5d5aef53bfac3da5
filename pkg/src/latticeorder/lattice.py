"""Point-cloud lattices: generators, normalization, perturbation, file formats.

The PointCloud is the currency every other module trades in. Clouds carry a
unit tag ("pixels", "micrometers", "normalized"); comparison math expects
clouds normalized to the [-1, 1] x [-1, 1] box.
"""

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    DegenerateExtentError,
    DuplicatePointsError,
    FileFormatError,
    InvalidSpecError,
)
from .serialize import f17

UNIT_PIXELS = "pixels"
UNIT_MICROMETERS = "micrometers"
UNIT_NORMALIZED = "normalized"
_UNITS = (UNIT_PIXELS, UNIT_MICROMETERS, UNIT_NORMALIZED)

#: Minimum separation allowed between two normalized points.
DUPLICATE_GUARD = 1e-12


class Point2(NamedTuple):
    x: float
    y: float


def _min_pairwise_distance(xy: np.ndarray) -> float:
    """Exact minimum pairwise Euclidean distance, blockwise to bound memory."""
    n = len(xy)
    if n < 2:
        return math.inf
    best = math.inf
    block = 512
    for s in range(0, n, block):
        chunk = xy[s : s + block]
        diff = chunk[:, None, :] - xy[None, s:, :]
        d2 = diff[..., 0] ** 2 + diff[..., 1] ** 2
        # mask the self/lower-triangle part of this strip
        rows = np.arange(len(chunk))[:, None]
        cols = np.arange(d2.shape[1])[None, :]
        d2[cols <= rows] = np.inf
        m = d2.min() if d2.size else np.inf
        if m < best:
            best = m
    return math.sqrt(best) if math.isfinite(best) else math.inf


@dataclass(frozen=True)
class PointCloud:
    """Ordered 2D points with a unit tag. `xy` is an (n, 2) float64 array."""

    xy: np.ndarray
    unit: str = UNIT_NORMALIZED

    def __post_init__(self):
        xy = np.ascontiguousarray(np.asarray(self.xy, dtype=np.float64))
        if xy.ndim != 2 or xy.shape[1] != 2:
            raise InvalidSpecError(f"point cloud must be (n, 2), got {xy.shape}")
        if len(xy) < 1:
            raise InvalidSpecError("point cloud must contain at least one point")
        if not np.all(np.isfinite(xy)):
            raise InvalidSpecError("point cloud contains NaN or infinite coordinates")
        if self.unit not in _UNITS:
            raise InvalidSpecError(f"unknown unit tag {self.unit!r}")
        object.__setattr__(self, "xy", xy)
        if self.unit == UNIT_NORMALIZED and _min_pairwise_distance(xy) < DUPLICATE_GUARD:
            raise DuplicatePointsError(
                f"two normalized points closer than {DUPLICATE_GUARD:g}"
            )

    def __len__(self) -> int:
        return len(self.xy)

    @property
    def points(self) -> list[Point2]:
        return [Point2(float(x), float(y)) for x, y in self.xy]


@dataclass(frozen=True)
class LatticeSpec:
    """Perfect-lattice request: `kind` in {square, hexagonal}, `n` points per
    side (square) or rows (hexagonal). Output always targets [-1,1] x [-1,1]."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in ("square", "hexagonal"):
            raise InvalidSpecError(f"unknown lattice kind {self.kind!r}")
        if int(self.n) != self.n or self.n < 2:
            raise InvalidSpecError(f"lattice size n must be an integer >= 2, got {self.n!r}")


@dataclass(frozen=True)
class NominalGridSpec:
    """Commanded strike grid: datum at the upper-left center, row-major layout.

    pitch = scan speed / strike frequency when derived from process parameters.
    """

    rows: int
    cols: int
    pitch_x: float
    pitch_y: float
    datum: Point2
    unit: str = UNIT_PIXELS

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1 or self.rows * self.cols < 4:
            raise InvalidSpecError("nominal grid needs rows*cols >= 4")
        if not (self.pitch_x > 0 and self.pitch_y > 0):
            raise InvalidSpecError("nominal grid pitches must be positive")
        if self.unit not in _UNITS:
            raise InvalidSpecError(f"unknown unit tag {self.unit!r}")


@dataclass(frozen=True)
class PerturbationSpec:
    """Isotropic Gaussian displacement in normalized units, seeded."""

    sigma: float
    rng_seed: int = 0

    def __post_init__(self):
        if not (self.sigma >= 0):
            raise InvalidSpecError(f"sigma must be >= 0, got {self.sigma!r}")


@dataclass(frozen=True)
class ScaleTransform:
    """Per-axis affine map x' = x*scale + offset recorded for traceability."""

    scale_x: float
    offset_x: float
    scale_y: float
    offset_y: float

    def apply(self, xy: np.ndarray) -> np.ndarray:
        out = np.empty_like(xy)
        out[:, 0] = xy[:, 0] * self.scale_x + self.offset_x
        out[:, 1] = xy[:, 1] * self.scale_y + self.offset_y
        return out


def gen_square(spec: LatticeSpec) -> PointCloud:
    """n x n grid at (-1 + 2i/(n-1), -1 + 2j/(n-1)), x-major order."""
    if spec.kind != "square":
        raise InvalidSpecError(f"gen_square needs kind='square', got {spec.kind!r}")
    n = spec.n
    c = -1.0 + 2.0 * np.arange(n, dtype=np.float64) / (n - 1)
    xs = np.repeat(c, n)
    ys = np.tile(c, n)
    return PointCloud(np.column_stack([xs, ys]), UNIT_NORMALIZED)


def gen_hexagonal(spec: LatticeSpec) -> PointCloud:
    """Triangular close-packed patch: n rows of n points, odd rows shifted by
    half a pitch, row spacing s*sqrt(3)/2, bounding-box width exactly 2."""
    if spec.kind != "hexagonal":
        raise InvalidSpecError(f"gen_hexagonal needs kind='hexagonal', got {spec.kind!r}")
    n = spec.n
    s = 4.0 / (2 * n - 1)  # width (n-1)*s + s/2 == 2
    rows = []
    for r in range(n):
        y = r * (s * math.sqrt(3.0) / 2.0)
        off = s / 2.0 if r % 2 else 0.0
        for k in range(n):
            rows.append((k * s + off, y))
    xy = np.asarray(rows, dtype=np.float64)
    # center the patch: x spans [0, 2] by construction, y spans [0, height]
    xy[:, 0] -= 1.0
    xy[:, 1] -= xy[:, 1].max() / 2.0
    return PointCloud(xy, UNIT_NORMALIZED)


def gen_lattice(spec: LatticeSpec) -> PointCloud:
    return gen_square(spec) if spec.kind == "square" else gen_hexagonal(spec)


def gen_nominal_grid(spec: NominalGridSpec) -> PointCloud:
    """Row-major grid: point (r, c) = datum + (c*pitch_x, r*pitch_y)."""
    cc, rr = np.meshgrid(np.arange(spec.cols), np.arange(spec.rows))
    xs = spec.datum.x + cc.ravel() * spec.pitch_x
    ys = spec.datum.y + rr.ravel() * spec.pitch_y
    return PointCloud(np.column_stack([xs, ys]), spec.unit)


def perturb(cloud: PointCloud, p: PerturbationSpec) -> PointCloud:
    """Displace each point by i.i.d. Gaussian(0, sigma^2) per axis.

    Deterministic for a fixed rng_seed; sigma=0 returns the cloud unchanged.
    """
    if cloud.unit != UNIT_NORMALIZED:
        raise InvalidSpecError("perturb expects a normalized cloud")
    if p.sigma == 0:
        return cloud
    rng = np.random.default_rng(p.rng_seed)
    return PointCloud(cloud.xy + rng.normal(0.0, p.sigma, cloud.xy.shape), cloud.unit)


def scale_to_unit_box(cloud: PointCloud) -> tuple[PointCloud, ScaleTransform]:
    """Per-axis min-max map onto [-1, 1]; returns the applied transform.

    Per-axis (not uniform) scaling: clouds with directional drift stay
    comparable to the square reference field. Anisotropy is recorded in the
    returned transform.
    """
    xy = cloud.xy
    mins = xy.min(axis=0)
    maxs = xy.max(axis=0)
    if maxs[0] - mins[0] <= 0 or maxs[1] - mins[1] <= 0:
        raise DegenerateExtentError("cloud has zero extent along an axis")
    sx = 2.0 / (maxs[0] - mins[0])
    sy = 2.0 / (maxs[1] - mins[1])
    t = ScaleTransform(sx, -1.0 - mins[0] * sx, sy, -1.0 - mins[1] * sy)
    return PointCloud(t.apply(xy), UNIT_NORMALIZED), t


# ---------------------------------------------------------------------------
# file formats: CSV with header "x,y"; JSON {"unit": ..., "points": [[x,y],...]}


def cloud_to_csv(cloud: PointCloud) -> str:
    lines = ["x,y"]
    lines += [f"{f17(x)},{f17(y)}" for x, y in cloud.xy]
    return "\n".join(lines) + "\n"


def cloud_from_csv(text: str, unit: str = UNIT_NORMALIZED) -> PointCloud:
    lines = text.splitlines()
    if not lines or lines[0].strip().lower() != "x,y":
        raise FileFormatError("line 1: expected header 'x,y'")
    pts = []
    for no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise FileFormatError(f"line {no}: expected two comma-separated values")
        try:
            pts.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise FileFormatError(f"line {no}: could not parse {line!r}") from None
    if not pts:
        raise FileFormatError("no points in CSV")
    return PointCloud(np.asarray(pts, dtype=np.float64), unit)


def cloud_to_json(cloud: PointCloud) -> str:
    pts = ", ".join(f"[{f17(x)}, {f17(y)}]" for x, y in cloud.xy)
    return f'{{"unit": {json.dumps(cloud.unit)}, "points": [{pts}]}}\n'


def cloud_from_json(text: str) -> PointCloud:
    try:
        obj = json.loads(text)
        unit = obj["unit"]
        pts = [(float(x), float(y)) for x, y in obj["points"]]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"cloud JSON: {exc}") from None
    if not pts:
        raise FileFormatError("cloud JSON: no points")
    return PointCloud(np.asarray(pts, dtype=np.float64), unit)


def load_cloud(path, unit: str = UNIT_NORMALIZED) -> PointCloud:
    """Read a cloud file; JSON when the extension is .json, CSV otherwise."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if str(path).lower().endswith(".json"):
        return cloud_from_json(text)
    return cloud_from_csv(text, unit)


def save_cloud(path, cloud: PointCloud) -> None:
    text = cloud_to_json(cloud) if str(path).lower().endswith(".json") else cloud_to_csv(cloud)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
