"""Factorial grid blocks, star products, direction families, line counts."""

import math
from fractions import Fraction

import pytest

from fracproj.geometry import BallUnion, SquareUnion, VERTICAL, direction_from_pair
from fracproj.constructions.blocks import (
    block_B,
    block_L,
    block_Q,
    block_U,
    direction_D_single,
    directions_D,
    size_cap,
    skeleton,
    star_power,
    star_product,
    star_product_squares,
    verify_column_richness,
    verify_line_intersect,
    verify_skeleton_columns,
)


def ball_pair():
    return BallUnion.build(
        [(Fraction(-1, 4), 0), (Fraction(1, 4), 0)], Fraction(1, 4))


class TestStarProduct:
    def test_counts_multiply(self):
        K1 = BallUnion.build(
            [(Fraction(i, 10) - Fraction(3, 20), 0) for i in range(4)],
            Fraction(1, 100))
        K2 = BallUnion.build(
            [(0, Fraction(i, 10) - Fraction(1, 5)) for i in range(5)],
            Fraction(1, 100))
        assert len(star_product(K1, K2)) == 20

    def test_unit_ball_identity(self):
        I = BallUnion.build([(Fraction(0), Fraction(0))], Fraction(1, 2))
        K = ball_pair()
        out = star_product(I, K)
        assert out.radius == K.radius
        assert set(out.centers) == set(K.centers)

    def test_radius_product(self):
        K1 = BallUnion.build([(Fraction(0), Fraction(0))], Fraction(1, 10))
        out = star_product(K1, K1)
        assert out.radius == Fraction(1, 50)  # 2 * (1/10) * (1/10)

    def test_doctest_pair(self):
        K = ball_pair()
        KK = star_product(K, K)
        assert (len(KK), KK.radius) == (4, Fraction(1, 8))

    def test_factor_must_fit(self):
        big = BallUnion.build([(Fraction(1, 4), 0)], Fraction(3, 8))
        with pytest.raises(ValueError):
            star_product(big, ball_pair())

    def test_square_variant_sides_multiply(self):
        Q = block_Q(2)
        out = star_product_squares(Q, Q)
        assert len(out) == 16
        assert out.side == Fraction(1, 16)

    def test_star_power(self):
        K = BallUnion.build(
            [(Fraction(i - 1, 4), 0) for i in range(3)], Fraction(1, 16))
        out = star_power(K, 3)
        assert len(out) == 27

    def test_star_power_identity(self):
        K = ball_pair()
        assert star_power(K, 1) is K


class TestBlocks:
    def test_Q1(self):
        Q = block_Q(1)
        assert (len(Q), Q.side) == (1, 1)

    def test_Q2(self):
        Q = block_Q(2)
        assert (len(Q), Q.side) == (4, Fraction(1, 4))
        assert set(Q.centers) == {(sx * Fraction(1, 8), sy * Fraction(1, 8))
                                  for sx in (-1, 1) for sy in (-1, 1)}

    def test_Q3(self):
        Q = block_Q(3)
        assert (len(Q), Q.side) == (9, Fraction(1, 9))
        # top-left square shares the ambient top-left corner
        assert (Fraction(-1, 2) + Fraction(1, 18),
                Fraction(1, 2) - Fraction(1, 18)) in Q.centers

    def test_L(self):
        L = block_L(2, 3)
        assert (len(L), L.side) == (8, Fraction(1, 8))
        assert all(c[0] == 0 for c in L.centers)

    def test_U3(self):
        U = block_U(3)
        assert (len(U), U.side) == (36, Fraction(1, 36))

    def test_U_general_law(self):
        for n in (1, 2, 3, 4):
            U = block_U(n)
            f = math.factorial(n)
            assert len(U) == f * f and U.side == Fraction(1, f * f)

    def test_B0(self):
        B = block_B(0, 3)
        assert (len(B), B.radius) == (1, Fraction(1, 2))

    def test_B3_d3(self):
        B = block_B(3, 3)
        f5 = 6 ** 5
        assert len(B) == f5 == 7776
        assert B.radius == Fraction(1, 2 * f5)  # diameter (n!)^-(2+d)

    def test_B_interiors_disjoint(self):
        B = block_B(2, 3)
        BallUnion.build(B.centers, B.radius, check=True)

    def test_skeleton_multiplicative(self):
        K1, K2 = block_Q(2), block_Q(3)
        prod = star_product_squares(K1, K2)
        assert len(skeleton(prod)) == len(skeleton(K1)) * len(skeleton(K2))

    def test_size_cap_enforced(self, monkeypatch):
        monkeypatch.setenv("FRACPROJ_SIZE_CAP", "100")
        assert size_cap() == 100
        with pytest.raises(ValueError):
            block_U(4)  # 576 squares > 100


class TestDirectionsD:
    def test_family_sizes(self):
        assert len(directions_D(3, 3)) == 1
        assert len(directions_D(3, 4)) == 6

    def test_single_member_tag(self):
        # tags are stored gcd-reduced: (2, 6^4) normalizes to (1, 648)
        e = direction_D_single(3, 4, 2)
        assert e.normal_pair() == (1, 648)
        e1 = direction_D_single(3, 4, 1)
        assert e1.normal_pair() == (1, 6 ** 4)

    def test_near_vertical(self):
        for e in directions_D(3, 4):
            assert math.hypot(e.x - 0, e.y - 1) <= 2 / 6 ** 3 + 1e-12

    def test_rotated_family(self):
        base = direction_from_pair(3, 4)
        for e in directions_D(3, 4, base=base):
            off = min(math.hypot(e.x - base.x, e.y - base.y),
                      math.hypot(e.x + base.x, e.y + base.y))
            assert off <= 2 / 6 ** 3 + 1e-12

    def test_k_range_enforced(self):
        with pytest.raises(ValueError):
            direction_D_single(3, 4, 7)
        with pytest.raises(ValueError):
            directions_D(2, 3)


class TestLineIntersect:
    def test_columns_normal_form(self):
        out = verify_skeleton_columns(3, 3)
        assert out["columns_ok"] and out["normal_form_ok"]
        assert out["n_columns"] == 6

    def test_line_counts_small(self):
        out = verify_line_intersect(3, 3)
        assert out["holds"]
        assert all(r["intersection_exact"] for r in out["per_k"])
        assert all(r["cardinality_bound_ok"] for r in out["per_k"])

    def test_column_richness_small(self):
        assert verify_column_richness(3, 3)
        assert verify_column_richness(2, 3)
