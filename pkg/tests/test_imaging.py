import math

import numpy as np
import pytest

from helpers import render_disks
from latticeorder.errors import (
    BoundsError,
    EmptyResultError,
    FileFormatError,
    InvalidSpecError,
    UnitMismatchError,
)
from latticeorder.imaging import (
    CropSpec,
    GrayImage,
    Point2,
    RegionGrowParams,
    center_crop,
    derive_crop,
    match_grids,
    region_grow,
    to_grayscale,
)
from latticeorder.lattice import PointCloud


class TestToGrayscale:
    def test_pure_white(self):
        img = to_grayscale(np.full((2, 2, 3), 255, dtype=np.uint8))
        assert np.all(img.pixels == 255)

    def test_pure_red(self):
        rgb = np.zeros((1, 1, 3), dtype=np.uint8)
        rgb[..., 0] = 255
        assert to_grayscale(rgb).pixels[0, 0] == 76  # round(0.299 * 255)

    def test_gray_input_is_identity(self):
        gray = np.arange(16, dtype=np.uint8).reshape(4, 4)
        assert np.array_equal(to_grayscale(gray).pixels, gray)

    def test_rejects_wrong_depth(self):
        with pytest.raises(FileFormatError):
            to_grayscale(np.zeros((4, 4, 3), dtype=np.uint16))


class TestCenterCrop:
    def test_10_to_4_starts_at_3(self):
        img = GrayImage(np.arange(100, dtype=np.uint8).reshape(10, 10))
        out = center_crop(img, CropSpec(4, 4))
        assert out.width == 4 and out.height == 4
        assert out.pixels[0, 0] == img.pixels[3, 3]

    def test_same_size_is_identity(self):
        img = GrayImage(np.arange(36, dtype=np.uint8).reshape(6, 6))
        out = center_crop(img, CropSpec(6, 6))
        assert np.array_equal(out.pixels, img.pixels)

    def test_double_crop_equals_single(self):
        img = GrayImage(np.arange(0, 200, 2, dtype=np.uint8).reshape(10, 10))
        once = center_crop(img, CropSpec(4, 4))
        twice = center_crop(center_crop(img, CropSpec(4, 4)), CropSpec(4, 4))
        assert np.array_equal(once.pixels, twice.pixels)

    def test_oversized_crop_rejected(self):
        img = GrayImage(np.zeros((5, 5), dtype=np.uint8))
        with pytest.raises(BoundsError):
            center_crop(img, CropSpec(6, 4))


class TestRegionCapDefault:
    def test_process_parameters_set_the_cap(self):
        from latticeorder.imaging import default_max_region_px

        img = GrayImage(np.zeros((1000, 1000), dtype=np.uint8))
        # 100 px per pitch -> expected circle area 10000 -> cap 40000
        assert default_max_region_px(img, pitch_um=1.0, v_s=100.0, f=1.0) == 40000
        assert default_max_region_px(img) == 250000


class TestDeriveCrop:
    def test_microscope_scale_numbers(self):
        # strike offset 300 um at 0.21 um/px, 5x5 field
        spec = derive_crop(pitch_um=0.21, v_s=30000.0, f=100.0, grid_n=5)
        assert spec.out_width == 7143 and spec.out_height == 7143

    def test_simple_ratio(self):
        spec = derive_crop(pitch_um=1.0, v_s=100.0, f=1.0, grid_n=5)
        assert spec.out_width == 500

    def test_single_pitch(self):
        spec = derive_crop(pitch_um=1.0, v_s=100.0, f=1.0, grid_n=1)
        assert spec.out_width == 100

    def test_rejects_nonpositive(self):
        with pytest.raises(InvalidSpecError):
            derive_crop(pitch_um=0.0, v_s=1.0, f=1.0, grid_n=3)


class TestRegionGrow:
    def test_disk_centroid_within_one_pixel(self):
        img = GrayImage(render_disks(200, [(100.0, 100.0)], 30))
        # seed near the inside edge of the disk, not at the center
        params = RegionGrowParams(seeds=[Point2(78, 100)], tolerance=25)
        cs = region_grow(img, params)
        assert len(cs.centers) == 1
        cx, cy = cs.centers.xy[0]
        assert math.hypot(cx - 100, cy - 100) <= 1.0
        assert cs.region_sizes[0] == pytest.approx(math.pi * 30**2, rel=0.15)

    def test_uniform_image_trips_the_cap(self):
        img = GrayImage(np.full((64, 64), 120, dtype=np.uint8))
        params = RegionGrowParams(seeds=[Point2(10, 10)], tolerance=0, max_region_px=1000)
        with pytest.raises(EmptyResultError):
            region_grow(img, params)

    def test_two_disks_two_centers(self):
        img = GrayImage(render_disks(300, [(80.0, 90.0), (210.0, 200.0)], 25))
        params = RegionGrowParams(seeds=[Point2(80, 90), Point2(210, 200)])
        cs = region_grow(img, params)
        assert len(cs.centers) == 2
        assert math.hypot(*(cs.centers.xy[0] - [80, 90])) <= 1.0
        assert math.hypot(*(cs.centers.xy[1] - [210, 200])) <= 1.0
        for size in cs.region_sizes:
            assert size == pytest.approx(math.pi * 25**2, rel=0.2)

    def test_seed_position_invariance_inside_flat_region(self):
        img = GrayImage(render_disks(200, [(100.0, 100.0)], 40))
        seeds = [Point2(100, 100), Point2(80, 100), Point2(100, 125), Point2(112, 88)]
        cs = region_grow(img, RegionGrowParams(seeds=seeds))
        assert len(set(cs.region_sizes)) == 1
        assert np.all(cs.centers.xy == cs.centers.xy[0])

    def test_centroid_accuracy_over_random_placements(self):
        rng = np.random.default_rng(31)
        for _ in range(25):
            radius = float(rng.uniform(10, 26))
            cx = float(rng.uniform(40, 160))
            cy = float(rng.uniform(40, 160))
            img = GrayImage(render_disks(200, [(cx, cy)], radius))
            # contrast 160, tolerance >= contrast/2
            params = RegionGrowParams(seeds=[Point2(round(cx), round(cy))], tolerance=80)
            cs = region_grow(img, params)
            ex, ey = cs.centers.xy[0]
            assert math.hypot(ex - cx, ey - cy) <= 1.0

    def test_eight_connectivity_crosses_diagonal_gaps(self):
        pix = np.full((9, 9), 200, dtype=np.uint8)
        for k in range(9):
            pix[k, k] = 10
        img = GrayImage(pix)
        with pytest.raises(EmptyResultError):
            # 4-connectivity sees a single dark pixel: below the 4 px floor
            region_grow(img, RegionGrowParams(seeds=[Point2(0, 0)], tolerance=5,
                                              connectivity=4, max_region_px=80))
        eight = region_grow(img, RegionGrowParams(seeds=[Point2(0, 0)], tolerance=5,
                                                  connectivity=8, max_region_px=80))
        assert eight.region_sizes[0] == 9

    def test_seed_out_of_bounds(self):
        img = GrayImage(np.zeros((10, 10), dtype=np.uint8))
        with pytest.raises(BoundsError):
            region_grow(img, RegionGrowParams(seeds=[Point2(20, 5)]))

    def test_tiny_region_is_a_failure(self):
        pix = render_disks(100, [(60.0, 60.0)], 12)
        pix[5, 5] = 0
        pix[10, 10] = 0
        pix[10, 11] = 0
        img = GrayImage(pix)
        cs = region_grow(
            img,
            RegionGrowParams(
                seeds=[Point2(5, 5), Point2(10.4, 10.0), Point2(60, 60)], tolerance=10
            ),
        )
        assert len(cs.failures) == 2
        assert {f.reason.startswith("region of") for f in cs.failures} == {True}
        assert len(cs.centers) == 1
        with pytest.raises(EmptyResultError):
            region_grow(img, RegionGrowParams(seeds=[Point2(5, 5)], tolerance=10))

    def test_invalid_params(self):
        with pytest.raises(InvalidSpecError):
            RegionGrowParams(seeds=[Point2(0, 0)], tolerance=300)
        with pytest.raises(InvalidSpecError):
            RegionGrowParams(seeds=[Point2(0, 0)], connectivity=6)


class TestMatchGrids:
    def grid(self, shift=(0.0, 0.0), drop=None):
        pts = [
            (50.0 + 100 * c + shift[0], 50.0 + 100 * r + shift[1])
            for r in range(5)
            for c in range(5)
        ]
        if drop is not None:
            pts.pop(drop)
        return PointCloud(np.asarray(pts), "pixels")

    def test_identical_clouds_match_with_zero_displacement(self):
        result = match_grids(self.grid(), self.grid(), max_dist=10.0)
        assert len(result.matched) == 25
        assert not result.missed and not result.extra
        assert all(m.dx == 0.0 and m.dy == 0.0 for m in result.matched)

    def test_one_deleted_point_is_one_missed_strike(self):
        result = match_grids(self.grid(), self.grid(drop=7), max_dist=10.0)
        assert len(result.matched) == 24
        assert len(result.missed) == 1
        assert not result.extra

    def test_uniform_shift_matches_with_constant_displacement(self):
        result = match_grids(self.grid(), self.grid(shift=(3.0, -4.0)), max_dist=10.0)
        assert len(result.matched) == 25
        assert all((m.dx, m.dy) == (3.0, -4.0) for m in result.matched)

    def test_symmetry_with_negated_displacement(self):
        forward = match_grids(self.grid(), self.grid(shift=(2.0, 5.0)), max_dist=20.0)
        backward = match_grids(self.grid(shift=(2.0, 5.0)), self.grid(), max_dist=20.0)
        assert len(forward.matched) == len(backward.matched)
        fset = {(m.nominal, m.true) for m in forward.matched}
        bset = {(m.true, m.nominal) for m in backward.matched}
        assert fset == bset
        assert {(m.dx, m.dy) for m in forward.matched} == {(2.0, 5.0)}
        assert {(m.dx, m.dy) for m in backward.matched} == {(-2.0, -5.0)}

    def test_max_dist_filters_pairs(self):
        result = match_grids(self.grid(), self.grid(shift=(30.0, 0.0)), max_dist=10.0)
        assert not result.matched
        assert len(result.missed) == 25 and len(result.extra) == 25

    def test_unit_mismatch(self):
        a = PointCloud(np.array([[0.0, 0.0], [1.0, 1.0]]), "pixels")
        b = PointCloud(np.array([[0.0, 0.0], [1.0, 1.0]]), "micrometers")
        with pytest.raises(UnitMismatchError):
            match_grids(a, b, 1.0)
