import math

import numpy as np
import pytest

from latticeorder.errors import SizeGuardError
from latticeorder.lattice import LatticeSpec, PointCloud, gen_square
from latticeorder.oracle import components_at_threshold, naive_persistence
from latticeorder.persistence import compute_persistence, same_diagram

SQRT2 = math.sqrt(2.0)

UNIT_SQUARE = PointCloud(np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]), "pixels")


class TestNaivePersistence:
    def test_unit_square(self):
        diagram = naive_persistence(UNIT_SQUARE)
        assert len(diagram.h1) == 1
        assert diagram.h1[0, 0] == 1.0
        assert math.isclose(diagram.h1[0, 1], SQRT2)
        assert len(diagram.h0_deaths) == 3
        assert diagram.infinite_h0_count == 1

    def test_n3_square_closed_forms(self):
        diagram = naive_persistence(gen_square(LatticeSpec("square", 3)))
        assert len(diagram.h0_deaths) == 8
        assert np.allclose(diagram.h0_deaths, 1.0, atol=1e-12, rtol=0)
        assert len(diagram.h1) == 4
        assert np.allclose(diagram.h1[:, 0], 1.0, atol=1e-12, rtol=0)
        assert np.allclose(diagram.h1[:, 1], SQRT2, atol=1e-12, rtol=0)

    def test_size_guard(self, rng):
        with pytest.raises(SizeGuardError):
            naive_persistence(PointCloud(rng.uniform(-1, 1, (17, 2))))

    def test_matches_engine_on_random_cloud(self, rng):
        cloud = PointCloud(rng.uniform(-1, 1, (12, 2)))
        assert same_diagram(naive_persistence(cloud), compute_persistence(cloud))


class TestComponentsAtThreshold:
    def test_n5_square_below_and_at_spacing(self):
        cloud = gen_square(LatticeSpec("square", 5))
        assert components_at_threshold(cloud, 0.49) == 25
        assert components_at_threshold(cloud, 0.5) == 1

    def test_everything_connects_at_infinity(self, rng):
        cloud = PointCloud(rng.uniform(-1, 1, (9, 2)))
        assert components_at_threshold(cloud, math.inf) == 1

    def test_single_point(self):
        assert components_at_threshold(PointCloud(np.array([[0.0, 0.0]]), "pixels"), 0.0) == 1


class TestEngineAgainstOracle:
    def test_seeded_random_clouds(self):
        rng = np.random.default_rng(90125)
        for _ in range(25):
            size = int(rng.integers(5, 13))
            cloud = PointCloud(rng.uniform(-1, 1, (size, 2)))
            assert same_diagram(compute_persistence(cloud), naive_persistence(cloud))

    def test_alive_bars_equal_component_count(self):
        rng = np.random.default_rng(777)
        for _ in range(5):
            cloud = PointCloud(rng.uniform(-1, 1, (11, 2)))
            diagram = compute_persistence(cloud)
            for _ in range(20):
                t = float(rng.uniform(0, 1.2))
                alive = int(np.sum(diagram.h0_deaths > t)) + diagram.infinite_h0_count
                assert alive == components_at_threshold(cloud, t)
