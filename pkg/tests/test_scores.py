import math

import numpy as np
import pytest

from latticeorder.errors import InsufficientDataError, InvalidSpecError
from latticeorder.lattice import LatticeSpec, PointCloud, gen_hexagonal, gen_square
from latticeorder.persistence import PersistenceDiagram, compute_persistence
from latticeorder.scores import (
    CATEGORY_BETWEEN,
    CATEGORY_HEXAGONAL,
    CATEGORY_NEITHER,
    CATEGORY_SQUARE,
    compute_scores,
    h0_score,
    h0_variance,
    h1_score,
    h1_sum,
    histogram,
    infer_grid_side,
    interpret,
)

SQRT2 = math.sqrt(2.0)


def diagram_with(h0_deaths, h1=(), infinite=1):
    return PersistenceDiagram(
        h0_deaths=np.asarray(h0_deaths, dtype=float),
        h1=np.asarray(h1, dtype=float).reshape(-1, 2),
        infinite_h0_count=infinite,
        threshold_used=1.0,
    )


class TestH0Variance:
    @pytest.mark.parametrize("n", [2, 4, 7])
    def test_zero_for_perfect_square(self, n):
        # coordinate rounding leaves ulp-level jitter for non-dyadic spacings
        diagram = compute_persistence(gen_square(LatticeSpec("square", n)))
        assert h0_variance(diagram) <= 1e-30

    @pytest.mark.parametrize("n", [3, 5])
    def test_zero_for_perfect_hexagonal(self, n):
        diagram = compute_persistence(gen_hexagonal(LatticeSpec("hexagonal", n)))
        assert h0_variance(diagram) <= 1e-9

    def test_two_point_population_variance(self):
        assert math.isclose(h0_variance(diagram_with([0.4, 0.6])), 0.01)

    def test_population_not_sample(self):
        # sample variance of {0.4, 0.6} would be 0.02
        assert h0_variance(diagram_with([0.4, 0.6])) < 0.015

    def test_needs_two_finite_pairs(self):
        with pytest.raises(InsufficientDataError):
            h0_variance(diagram_with([0.5]))


class TestH0Score:
    def test_perfect_square_is_zero(self):
        assert h0_score(compute_persistence(gen_square(LatticeSpec("square", 6)))) <= 1e-30

    def test_four_times_variance(self):
        assert math.isclose(h0_score(diagram_with([0.4, 0.6])), 0.04)

    def test_perturbed_square_is_positive(self):
        from latticeorder.lattice import PerturbationSpec, perturb

        cloud = perturb(gen_square(LatticeSpec("square", 5)), PerturbationSpec(0.05, 1))
        assert h0_score(compute_persistence(cloud)) > 0.0

    def test_perturbed_square_golden_values(self):
        # frozen regression pin for sigma=0.05, seed 1 on the n=5 lattice
        from latticeorder.lattice import PerturbationSpec, perturb

        cloud = perturb(gen_square(LatticeSpec("square", 5)), PerturbationSpec(0.05, 1))
        scores = compute_scores(compute_persistence(cloud))
        assert scores.h0_var == 0.0026294166920559862
        assert scores.h0_bar == 0.010517666768223945
        assert scores.h1_sum == 1.864781072056084
        assert scores.h1_bar == 0.56274746937680464


class TestH1Sum:
    def test_n5_square_closed_form(self):
        diagram = compute_persistence(gen_square(LatticeSpec("square", 5)))
        assert math.isclose(h1_sum(diagram), 16 * (SQRT2 - 1) * 0.5, rel_tol=1e-12)

    def test_perfect_hexagonal_is_zero(self):
        diagram = compute_persistence(gen_hexagonal(LatticeSpec("hexagonal", 4)))
        assert h1_sum(diagram) <= 1e-12

    def test_empty_h1_is_zero(self):
        assert h1_sum(diagram_with([0.5, 0.5])) == 0.0


class TestH1Score:
    @pytest.mark.parametrize("n", range(2, 11))
    def test_perfect_square_is_unity(self, n):
        diagram = compute_persistence(gen_square(LatticeSpec("square", n)))
        assert abs(h1_score(diagram, n) - 1.0) <= 1e-9

    def test_hexagonal_is_zero_with_matched_n(self):
        n = 5  # n x n points in both lattice types
        diagram = compute_persistence(gen_hexagonal(LatticeSpec("hexagonal", n)))
        assert h1_score(diagram, n) <= 1e-9

    def test_zero_lifetime_free_diagram(self):
        diagram = diagram_with([0.5, 0.5], [])
        assert h1_score(diagram, 5) == 0.0

    def test_rejects_bad_n(self):
        with pytest.raises(InvalidSpecError):
            h1_score(diagram_with([0.5, 0.5]), 1)


class TestInferGridSide:
    def test_square_count(self):
        diagram = compute_persistence(gen_square(LatticeSpec("square", 6)))
        assert infer_grid_side(diagram) == 6

    def test_rejects_non_square_count(self, rng):
        diagram = compute_persistence(PointCloud(rng.uniform(-1, 1, (10, 2))))
        with pytest.raises(InvalidSpecError, match="explicit"):
            infer_grid_side(diagram)


class TestInterpret:
    def test_table_style_reading(self):
        ps, ph, category, summary = interpret(2.29e-3, 0.314)
        assert math.isclose(ps, 31.4, rel_tol=1e-12)
        assert math.isclose(ps + ph, 100.0, rel_tol=1e-12)
        assert category == CATEGORY_BETWEEN
        assert "31.4% square" in summary

    def test_pure_square(self):
        ps, ph, category, _ = interpret(0.0, 1.0)
        assert ps == 100.0 and ph == 0.0
        assert category == CATEGORY_SQUARE

    def test_pure_hexagonal(self):
        ps, ph, category, _ = interpret(0.0, 0.0)
        assert ps == 0.0 and ph == 100.0
        assert category == CATEGORY_HEXAGONAL

    def test_large_h0_suppresses_percentages(self):
        ps, ph, category, _ = interpret(0.5, 0.9)
        assert ps is None and ph is None
        assert category == CATEGORY_NEITHER

    def test_h1_above_one_is_clamped_only_in_percentages(self):
        ps, _, _, _ = interpret(0.0, 1.2)
        assert ps == 100.0

    def test_percentages_sum_to_100_when_defined(self, rng):
        for _ in range(20):
            ps, ph, _, _ = interpret(float(rng.uniform(0, 0.009)), float(rng.uniform(0, 1.3)))
            assert math.isclose(ps + ph, 100.0, rel_tol=1e-12)


class TestComputeScores:
    def test_perfect_square_endpoint(self):
        scores = compute_scores(compute_persistence(gen_square(LatticeSpec("square", 5))))
        assert scores.n == 5
        assert scores.h0_bar == 0.0
        assert abs(scores.h1_bar - 1.0) <= 1e-9
        assert scores.percent_square == 100.0
        assert scores.category == CATEGORY_SQUARE

    def test_h1_score_not_clamped_in_raw_value(self):
        # denser-than-nominal cloud: a 7x7 field scored against n=5
        diagram = compute_persistence(gen_square(LatticeSpec("square", 7)))
        scores = compute_scores(diagram, n=5)
        assert scores.h1_bar > 1.0
        assert scores.percent_square == 100.0

    def test_monotone_square_to_hexagonal_interpolation(self):
        n = 5
        sq = gen_square(LatticeSpec("square", n)).xy
        hx = gen_hexagonal(LatticeSpec("hexagonal", n)).xy
        sq = sq[np.lexsort((sq[:, 0], sq[:, 1]))]
        hx = hx[np.lexsort((hx[:, 0], hx[:, 1]))]
        values = []
        for step in range(11):
            t = step / 10.0
            diagram = compute_persistence(PointCloud((1 - t) * sq + t * hx))
            values.append(h1_score(diagram, n))
        assert abs(values[0] - 1.0) <= 1e-9
        assert abs(values[-1]) <= 1e-9
        assert all(values[k] >= values[k + 1] - 1e-12 for k in range(10))


class TestHistogram:
    def test_n5_square_deaths_land_in_one_bin(self):
        diagram = compute_persistence(gen_square(LatticeSpec("square", 5)))
        hist = histogram(diagram, dim=0, statistic="death", bins=10)
        assert hist.counts.sum() == 24
        assert (hist.counts > 0).sum() == 1
        assert hist.counts[-1] == 24  # max value lands in the right-closed last bin

    def test_n5_square_lifetime_spike(self):
        diagram = compute_persistence(gen_square(LatticeSpec("square", 5)))
        hist = histogram(diagram, dim=1, statistic="lifetime", bins=8)
        assert hist.counts.sum() == 16
        assert hist.counts.max() == 16

    def test_counts_conserve_pairs(self, rng):
        diagram = compute_persistence(PointCloud(rng.uniform(-1, 1, (20, 2))))
        hist0 = histogram(diagram, dim=0, bins=7)
        hist1 = histogram(diagram, dim=1, bins=7)
        assert hist0.counts.sum() == len(diagram.h0_deaths)
        assert hist1.counts.sum() == len(diagram.h1)

    def test_empty_dimension_degenerates(self):
        diagram = diagram_with([0.5, 0.5])
        hist = histogram(diagram, dim=1, bins=5)
        assert hist.counts.tolist() == [0]
        assert hist.bin_edges.tolist() == [0.0, 0.0]

    def test_rejects_bad_bins(self):
        with pytest.raises(InvalidSpecError):
            histogram(diagram_with([0.5, 0.5]), dim=0, bins=0)
