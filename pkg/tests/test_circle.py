"""Nested arc families on the circle with calibrated packing."""

from fractions import Fraction

import pytest

from fracproj.constructions.circle import (
    SetEParams,
    _greedy_angle_packing,
    _smallest_n,
    construct_setE,
    default_setE_params,
)


class TestStepSizes:
    def test_known_first_step(self):
        # n^(1/2) * 1 >= 10 first holds at n = 100
        assert _smallest_n(Fraction(1), 0.5) == 100

    def test_minimality(self):
        for r, t in [(Fraction(1, 2), 0.3), (Fraction(1, 64), 0.15)]:
            n = _smallest_n(r, t)
            assert n ** (1 - t) * float(r) ** t >= 10
            assert n == 1 or (n - 1) ** (1 - t) * float(r) ** t < 10

    def test_greedy_packing(self):
        angles = [Fraction(i, 10) for i in range(5)]
        assert _greedy_angle_packing(angles, Fraction(1, 10)) == 5
        assert _greedy_angle_packing(angles, Fraction(3, 20)) == 3


class TestParams:
    def test_defaults(self):
        p = default_setE_params(3)
        assert p.depth == 3 and len(p.t) == 3

    def test_validation(self):
        with pytest.raises(ValueError):
            SetEParams(t=(0.5,), depth=2)
        with pytest.raises(ValueError):
            SetEParams(t=(1.5,), depth=1)


class TestConstruction:
    @pytest.fixture(scope="class")
    def result(self):
        return construct_setE(default_setE_params(2))

    def test_arc_count_multiplies(self, result):
        counts = [len(lev.arcs) for lev in result.levels]
        ns = [lev.n for lev in result.levels]
        assert counts[1] == ns[1]
        assert counts[2] == ns[1] * ns[2]

    def test_certificates(self, result):
        for lev in result.levels[1:]:
            c = lev.certificates
            assert c["P1_value"] >= 10
            assert c["P1_minimal"]
            assert c["P2_separation_ok"] and c["P2_packing_ok"]
            assert c["P3_disjoint"] and c["P3_r_maximal"]
            assert c["P3_power_of_half"]

    def test_radii_decrease(self, result):
        rs = [lev.r for lev in result.levels]
        assert all(b < a for a, b in zip(rs, rs[1:]))

    def test_angles_exact_and_sorted(self, result):
        for lev in result.levels:
            assert all(isinstance(a, Fraction) for a in lev.angles)
            assert list(lev.angles) == sorted(lev.angles)

    def test_nesting(self, result):
        parent = result.levels[1]
        child = result.levels[2]
        r_half = parent.r / 2
        for a in child.angles:
            assert any(abs(a - mid) < r_half for mid, _ in parent.arcs)

    def test_points_on_unit_circle(self, result):
        import math
        for x, y in result.points():
            assert math.hypot(x, y) == pytest.approx(1.0)

    def test_text_dump(self, result):
        text = result.to_text()
        assert text.startswith("#arcs 0 ")
