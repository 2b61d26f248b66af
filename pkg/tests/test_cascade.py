"""Ball cascade with prescribed projection content along dense directions."""

from fractions import Fraction

import pytest

from fracproj.constructions.cascade import (
    MainParams,
    _smallest_q,
    construct_main,
    content_proxy,
    default_directions,
    diagonal_pairs,
)
from fracproj.geometry import BallUnion, direction_from_pair


class TestOrdering:
    def test_diagonal_pairs(self):
        assert diagonal_pairs(6) == [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1)]

    def test_every_pair_reached(self):
        pairs = diagonal_pairs(15)
        assert set(pairs) == {(m, n) for m in range(1, 6)
                              for n in range(1, 6) if m + n <= 6}

    def test_default_directions(self):
        dirs = default_directions(4)
        assert [e.normal_pair() for e in dirs] == \
            [(1, -1), (1, 0), (1, 1), (0, 1)]

    def test_default_directions_primitive(self):
        import math
        for e in default_directions(20):
            a, b = e.normal_pair()
            assert math.gcd(abs(a), abs(b)) == 1


class TestSplitFactor:
    def test_known_case(self):
        # 1 * (1/q)^(1/2) <= 1/2 first holds at q = 4
        assert _smallest_q(1, Fraction(1), 0.5) == 4

    def test_minimality(self):
        for p, d, s in [(3, Fraction(1, 3), 0.9), (27, Fraction(1, 27), 0.75)]:
            q = _smallest_q(p, d, s)
            assert p * float(d / q) ** s <= 0.5
            assert q == 2 or p * float(d / (q - 1)) ** s > 0.5


class TestConstruction:
    @pytest.fixture(scope="class")
    def result(self):
        return construct_main(
            MainParams(directions=tuple(default_directions(3)), steps=5))

    def test_diameter_sum_exactly_one(self, result):
        for g in result.generations:
            assert len(g.balls) * g.diameter == 1
            assert g.certificates["diameter_sum_one"]

    def test_q_minimality_certified(self, result):
        for g in result.generations[1:]:
            assert g.certificates["q_minimal"]

    def test_proxy_below_one(self, result):
        for g in result.generations[1:]:
            assert g.certificates["proxy_ok"]
            assert g.certificates["proxy_max"] <= 1.0

    def test_arcs_emitted(self, result):
        arcs = result.arcs
        assert len(arcs) == len(result.generations) - 1
        for (m, n), arc in arcs:
            assert arc.length == float(result.generations[0].diameter) or \
                arc.length > 0

    def test_proxy_collapses_near_split_direction(self, result):
        g = result.generations[-1]
        (m, n) = g.pair
        e = result.params.directions[m - 1]
        s = result.params.s(n)
        assert content_proxy(g.balls, e, s) <= 1.0

    def test_text_dump_shape(self, result):
        text = result.to_text()
        assert text.startswith("#balls 0 ")
        assert len(text.strip().split("\n")) == \
            len(result.generations) + sum(len(g.balls) for g in result.generations)

    def test_needs_enough_directions(self):
        with pytest.raises(ValueError):
            MainParams(directions=tuple(default_directions(1)), steps=5)


class TestContentProxy:
    def test_single_ball(self):
        K = BallUnion.build([(0, 0)], Fraction(1, 2))
        # N(rho(K), 1/2) = 1, so proxy = 1 * 1^s = 1 for any s
        assert content_proxy(K, direction_from_pair(1, 0), 0.5) == \
            pytest.approx(1.0)
