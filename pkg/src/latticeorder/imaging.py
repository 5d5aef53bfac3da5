"""From treated-surface images to indentation centers and grid comparisons.

Seeded region growing: flood the connected pixel set within an intensity
tolerance of the seed, take the region's pixel-mean centroid as the center.
One seed per expected indentation; seeds come from a CSV or are initialized
at the nominal grid centers (a convenience; drift can put nominal centers
outside their true indentation, which is why manual seeds exist at all).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BoundsError,
    EmptyResultError,
    FileFormatError,
    InvalidSpecError,
    UnitMismatchError,
)
from .lattice import UNIT_PIXELS, Point2, PointCloud


@dataclass(frozen=True)
class GrayImage:
    """8-bit single-channel raster; pitch_um is the spatial calibration."""

    pixels: np.ndarray
    pitch_um: float | None = None

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.dtype != np.uint8:
            raise FileFormatError("GrayImage needs a 2D uint8 array")
        if self.pitch_um is not None and not self.pitch_um > 0:
            raise InvalidSpecError("pitch_um must be positive")
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class CropSpec:
    out_width: int
    out_height: int

    def __post_init__(self):
        if self.out_width < 1 or self.out_height < 1:
            raise InvalidSpecError("crop dimensions must be positive")


@dataclass(frozen=True)
class RegionGrowParams:
    """Flood-fill controls. tolerance is the max |intensity - seed| admitted;
    max_region_px of None means image_area / 4 at run time."""

    seeds: list[Point2] = field(default_factory=list)
    tolerance: int = 25
    connectivity: int = 4
    max_region_px: int | None = None

    def __post_init__(self):
        if not 0 <= self.tolerance <= 255:
            raise InvalidSpecError(f"tolerance must be in 0..255, got {self.tolerance}")
        if self.connectivity not in (4, 8):
            raise InvalidSpecError(f"connectivity must be 4 or 8, got {self.connectivity}")
        if self.max_region_px is not None and self.max_region_px < 1:
            raise InvalidSpecError("max_region_px must be positive")


@dataclass(frozen=True)
class RegionFailure:
    seed_index: int
    seed: Point2
    reason: str


@dataclass(frozen=True)
class CenterSet:
    """One center per seed that produced a usable region, in seed order."""

    centers: PointCloud
    region_sizes: list[int]
    failures: list[RegionFailure]


@dataclass(frozen=True)
class MatchedPair:
    nominal: Point2
    true: Point2
    dx: float
    dy: float


@dataclass(frozen=True)
class GridMatch:
    matched: list[MatchedPair]
    missed: list[Point2]  # nominal points without a mutual partner
    extra: list[Point2]  # detected points without a mutual partner


def to_grayscale(rgb: np.ndarray, pitch_um: float | None = None) -> GrayImage:
    """Rec.601 luminance: round(0.299 R + 0.587 G + 0.114 B), 8-bit in and out."""
    rgb = np.asarray(rgb)
    if rgb.ndim == 2 and rgb.dtype == np.uint8:
        return GrayImage(rgb.copy(), pitch_um)
    if rgb.ndim != 3 or rgb.shape[2] != 3 or rgb.dtype != np.uint8:
        raise FileFormatError("to_grayscale needs an 8-bit RGB (h, w, 3) array")
    lum = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    return GrayImage(np.clip(np.rint(lum), 0, 255).astype(np.uint8), pitch_um)


def center_crop(img: GrayImage, spec: CropSpec) -> GrayImage:
    """Crop anchored at floor((in - out) / 2) per axis."""
    if spec.out_width > img.width or spec.out_height > img.height:
        raise BoundsError(
            f"crop {spec.out_width}x{spec.out_height} exceeds image {img.width}x{img.height}"
        )
    x0 = (img.width - spec.out_width) // 2
    y0 = (img.height - spec.out_height) // 2
    return GrayImage(
        img.pixels[y0 : y0 + spec.out_height, x0 : x0 + spec.out_width].copy(), img.pitch_um
    )


def derive_crop(pitch_um: float, v_s: float, f: float, grid_n: int) -> CropSpec:
    """Crop side for a grid_n x grid_n field: strike offset v_s/f over the pixel pitch."""
    if not (pitch_um > 0 and v_s > 0 and f > 0 and grid_n > 0):
        raise InvalidSpecError("derive_crop needs positive pitch_um, v_s, f and grid_n")
    strike_offset_um = v_s / f
    pixels_per_pitch = strike_offset_um / pitch_um
    side = int(round(grid_n * pixels_per_pitch))
    return CropSpec(side, side)


def expected_circle_area_px(pitch_um: float, v_s: float, f: float) -> int:
    """Square of the per-strike pixel pitch; used to default the region cap."""
    side = derive_crop(pitch_um, v_s, f, 1)
    return side.out_width * side.out_height


def default_max_region_px(
    img: GrayImage,
    pitch_um: float | None = None,
    v_s: float | None = None,
    f: float | None = None,
) -> int:
    """Runaway-fill guard: 4x the expected indentation area when the process
    parameters are known, a quarter of the image otherwise."""
    if pitch_um is not None and v_s is not None and f is not None:
        return 4 * expected_circle_area_px(pitch_um, v_s, f)
    return (img.width * img.height) // 4


def _flood(admissible: np.ndarray, px: int, py: int, connectivity: int, cap: int):
    """Scanline flood fill. Returns (size, sum_x, sum_y) or None when the cap trips."""
    h, w = admissible.shape
    visited = np.zeros_like(admissible, dtype=bool)
    stack = [(py, px)]
    size = 0
    sum_x = 0
    sum_y = 0
    pad = 1 if connectivity == 8 else 0
    while stack:
        r, c = stack.pop()
        if visited[r, c] or not admissible[r, c]:
            continue
        row_ok = admissible[r]
        # expand the run [left, right] around c
        blocked = ~row_ok[: c + 1][::-1]
        hit = np.argmax(blocked)
        left = c - hit + 1 if blocked[hit] else 0
        blocked = ~row_ok[c:]
        hit = np.argmax(blocked)
        right = c + hit - 1 if blocked[hit] else w - 1
        run = visited[r, left : right + 1]
        fresh = int(run.size - run.sum())
        if fresh:
            idx = np.nonzero(~run)[0]
            sum_x += int(idx.sum()) + left * fresh
            sum_y += r * fresh
            size += fresh
            run[:] = True
        if size > cap:
            return None
        lo = max(left - pad, 0)
        hi = min(right + pad, w - 1)
        for nr in (r - 1, r + 1):
            if not 0 <= nr < h:
                continue
            seg = admissible[nr, lo : hi + 1] & ~visited[nr, lo : hi + 1]
            if not seg.any():
                continue
            starts = np.nonzero(seg & np.concatenate(([True], ~seg[:-1])))[0]
            for s in starts:
                stack.append((nr, lo + int(s)))
    return size, sum_x, sum_y


def region_grow(img: GrayImage, params: RegionGrowParams) -> CenterSet:
    """Flood each seed's intensity-homogeneous region; center = pixel-mean centroid.

    Regions larger than the cap or smaller than 4 px are reported as failures.
    The whole call fails only when every seed fails.
    """
    if not params.seeds:
        raise InvalidSpecError("region_grow needs at least one seed")
    cap = params.max_region_px
    if cap is None:
        cap = (img.width * img.height) // 4
    pix = img.pixels
    centers = []
    sizes = []
    failures = []
    for idx, seed in enumerate(params.seeds):
        px = int(round(seed.x))
        py = int(round(seed.y))
        if not (0 <= px < img.width and 0 <= py < img.height):
            raise BoundsError(f"seed {idx} at ({seed.x}, {seed.y}) outside the image")
        seed_val = int(pix[py, px])
        admissible = np.abs(pix.astype(np.int16) - seed_val) <= params.tolerance
        result = _flood(admissible, px, py, params.connectivity, cap)
        if result is None:
            failures.append(RegionFailure(idx, seed, f"region exceeds cap of {cap} px"))
            continue
        size, sum_x, sum_y = result
        if size < 4:
            failures.append(RegionFailure(idx, seed, f"region of {size} px is below 4 px"))
            continue
        centers.append((sum_x / size, sum_y / size))
        sizes.append(size)
    if not centers:
        raise EmptyResultError(
            "every seed failed: " + "; ".join(f"#{f.seed_index} {f.reason}" for f in failures)
        )
    cloud = PointCloud(np.asarray(centers, dtype=np.float64), UNIT_PIXELS)
    return CenterSet(centers=cloud, region_sizes=sizes, failures=failures)


def match_grids(nominal: PointCloud, true_centers: PointCloud, max_dist: float) -> GridMatch:
    """Mutual-nearest-neighbor pairing within max_dist.

    Unmatched nominal points are missed strikes; unmatched detections are extra.
    """
    if nominal.unit != true_centers.unit:
        raise UnitMismatchError(
            f"nominal cloud is in {nominal.unit!r}, detections in {true_centers.unit!r}"
        )
    a = nominal.xy
    b = true_centers.xy
    diff = a[:, None, :] - b[None, :, :]
    dist = np.sqrt(diff[..., 0] ** 2 + diff[..., 1] ** 2)
    nn_ab = np.argmin(dist, axis=1)
    nn_ba = np.argmin(dist, axis=0)
    matched = []
    used_a = set()
    used_b = set()
    for i in range(len(a)):
        j = int(nn_ab[i])
        if int(nn_ba[j]) == i and dist[i, j] <= max_dist:
            matched.append(
                MatchedPair(
                    nominal=Point2(float(a[i, 0]), float(a[i, 1])),
                    true=Point2(float(b[j, 0]), float(b[j, 1])),
                    dx=float(b[j, 0] - a[i, 0]),
                    dy=float(b[j, 1] - a[i, 1]),
                )
            )
            used_a.add(i)
            used_b.add(j)
    missed = [Point2(float(x), float(y)) for i, (x, y) in enumerate(a) if i not in used_a]
    extra = [Point2(float(x), float(y)) for j, (x, y) in enumerate(b) if j not in used_b]
    return GridMatch(matched=matched, missed=missed, extra=extra)
