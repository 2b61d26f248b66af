"""Covering/packing counts, mesh counts, and the box-dimension estimator."""

import math
from fractions import Fraction

import pytest

from fracproj.covering import (
    DimensionEstimate,
    ScaleProfile,
    covering_number_1d,
    covering_number_1d_points,
    covering_number_2d,
    direction_sweep,
    estimate_box_dimension,
    mesh_count_1d,
    packing_number_1d,
    packing_number_2d,
)
from fracproj.geometry import (
    HORIZONTAL,
    BallUnion,
    IntervalUnion,
    PointSet,
    direction_from_pair,
)
from fracproj.incidence import grid


class TestCovering1d:
    def test_unit_interval(self):
        assert covering_number_1d(IntervalUnion([(0, 1)]), Fraction(1, 4)) == 2

    def test_two_short_components(self):
        assert covering_number_1d(
            IntervalUnion([(0, 0.1), (0.5, 0.6)]), 0.05) == 2

    def test_mixed_components(self):
        assert covering_number_1d(
            IntervalUnion([(0, 1), (1.2, 1.4)]), 0.1) == 6

    def test_empty(self):
        assert covering_number_1d(IntervalUnion([]), 1) == 0

    def test_degenerate_point(self):
        assert covering_number_1d(IntervalUnion([(2, 2)]), Fraction(1, 2)) == 1

    def test_positive_delta_required(self):
        with pytest.raises(ValueError):
            covering_number_1d(IntervalUnion([(0, 1)]), 0)

    def test_scaling_invariance(self):
        U = IntervalUnion([(Fraction(0), Fraction(1)),
                           (Fraction(3, 2), Fraction(7, 4))])
        for k in range(1, 6):
            d = Fraction(1, 2 ** k)
            r = Fraction(1, 3)
            assert covering_number_1d(U.scale(r), d * r) == \
                covering_number_1d(U, d)

    def test_points_variant(self):
        assert covering_number_1d_points([0, 1, 2], Fraction(1, 2)) == 2
        assert covering_number_1d_points([], 1) == 0


class TestPacking1d:
    def test_unit_interval(self):
        assert packing_number_1d(IntervalUnion([(0, 1)]), Fraction(1, 4)) == 3

    def test_single_point(self):
        assert packing_number_1d(IntervalUnion([(5, 5)]), 1) == 1

    def test_far_components(self):
        assert packing_number_1d(
            IntervalUnion([(0, 0.1), (10, 10.1)]), 1) == 2


class TestMesh2d:
    def test_ball_in_one_cell(self):
        d = Fraction(1, 4)
        K = BallUnion.build([(d / 2, d / 2)], d / 4)
        assert covering_number_2d(K, d) == 1

    def test_lattice_corner_point(self):
        K = PointSet(((0, 0),))
        assert covering_number_2d(K, 1) == 4

    def test_unit_square_corners(self):
        half = Fraction(1, 2)
        K = PointSet(tuple((sx * half, sy * half)
                           for sx in (-1, 1) for sy in (-1, 1)))
        assert covering_number_2d(K, Fraction(3, 10)) == 4

    def test_greedy_mode_upper_bound(self):
        K = BallUnion.build([(Fraction(0), Fraction(0))], Fraction(1, 2))
        d = Fraction(1, 8)
        assert covering_number_2d(K, d, mode="greedy") >= \
            covering_number_2d(K, d, mode="mesh")

    def test_mesh_sandwich(self):
        # N(K, delta) <= M <= 4 N(K, delta/2), probed via the 1-D projections
        # of a ball union whose optimal N is computable from components.
        K = BallUnion.build([(Fraction(0), Fraction(0)),
                             (Fraction(1, 4), Fraction(1, 4))], Fraction(1, 16))
        for k in (3, 4, 5):
            d = Fraction(1, 2 ** k)
            M = covering_number_2d(K, d)
            M_half = covering_number_2d(K, d / 2)
            assert M <= M_half <= 4 * M

    def test_mesh_count_1d(self):
        U = IntervalUnion([(Fraction(0), Fraction(1))])
        assert mesh_count_1d(U, Fraction(1, 4)) == 6  # closed-cell edges
        U = IntervalUnion([(Fraction(1, 8), Fraction(3, 8))])
        assert mesh_count_1d(U, Fraction(1, 4)) == 2


class TestPacking2d:
    def test_grid_all_kept(self):
        count, exact = packing_number_2d(grid(3), 0.4)
        assert (count, exact) == (9, True)

    def test_two_close_points(self):
        count, exact = packing_number_2d(PointSet(((0, 0), (1, 0))), 0.6)
        assert count == 1 and not exact

    def test_single_point(self):
        assert packing_number_2d(PointSet(((2, 3),)), 1) == (1, True)


class TestEstimator:
    def test_constant_profile(self):
        prof = ScaleProfile(tuple((2.0 ** -k, 1) for k in range(2, 8)))
        assert estimate_box_dimension(prof).slope == pytest.approx(0.0, abs=1e-12)

    def test_linear_profile(self):
        prof = ScaleProfile(tuple((2.0 ** -k, 2 ** k) for k in range(4, 13)))
        est = estimate_box_dimension(prof)
        assert est.slope == pytest.approx(1.0, abs=0.01)
        assert not est.clamped

    def test_minimum_scales(self):
        with pytest.raises(ValueError):
            estimate_box_dimension(ScaleProfile(((0.5, 1), (0.25, 2))))

    def test_clamping(self):
        prof = ScaleProfile(tuple((2.0 ** -k, 8 ** k) for k in range(2, 8)))
        est = estimate_box_dimension(prof, ambient_dim=2)
        assert est.clamped and est.slope == 2.0

    def test_strictly_decreasing_deltas_required(self):
        with pytest.raises(ValueError):
            ScaleProfile(((0.5, 1), (0.5, 2), (0.25, 3)))

    def test_csv_round_shape(self):
        prof = ScaleProfile(((0.5, 1, 2), (0.25, 3, None), (0.125, 5, 7)))
        lines = prof.to_csv().strip().split("\n")
        assert lines[0] == "delta,N,P"
        assert lines[2] == "0.25,3,"


class TestDirectionSweep:
    def test_single_ball(self):
        K = BallUnion.build([(0, 0)], Fraction(1, 2))
        rows = direction_sweep(K, [HORIZONTAL], [Fraction(1, 4)])
        assert rows == [(0, 0, 2, 3)]

    def test_grid_points(self):
        rows = direction_sweep(grid(3), [HORIZONTAL], [0.4])
        assert rows[0][2] == 3

    def test_row_order(self):
        K = BallUnion.build([(0, 0)], Fraction(1, 2))
        dirs = [HORIZONTAL, direction_from_pair(1, 1)]
        deltas = [Fraction(1, 2), Fraction(1, 4)]
        rows = direction_sweep(K, dirs, deltas)
        assert [(r[0], r[1]) for r in rows] == [(0, 0), (0, 1), (1, 0), (1, 1)]
