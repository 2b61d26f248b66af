"""Tube indices, separated subsets, energies, exponent iteration."""

import math
from fractions import Fraction

import pytest

from fracproj.bounds import estimate_bound1
from fracproj.geometry import (
    HORIZONTAL,
    VERTICAL,
    PointSet,
    direction_from_pair,
)
from fracproj.incidence import grid
from fracproj.tubes import (
    balanced_split,
    counting_energy,
    direction_net,
    distinguished_rho,
    exponent_iteration,
    extract_delta_one_subset,
    is_delta_one_set,
    marstrand_exceptional_scan,
    riesz_energy,
    tube_index,
    weighted_energy,
)


class TestTubeIndex:
    def test_interior_value(self):
        assert tube_index((0.25, 0.0), HORIZONTAL, 0.1) == 2

    def test_boundary_value(self):
        # a point exactly on a tube boundary belongs to the upper tube;
        # exact rationals avoid binary-float noise (0.3/0.1 != 3 in floats)
        assert tube_index((Fraction(3, 10), 0), HORIZONTAL, Fraction(1, 10)) == 3

    def test_exact_rational(self):
        assert tube_index((0, Fraction(7, 3)), VERTICAL, Fraction(1, 2)) == 4

    def test_exact_negative(self):
        assert tube_index((0, Fraction(-1, 3)), VERTICAL, Fraction(1, 2)) == -1

    def test_exact_surrogate_direction(self):
        # rho = (q x + p y)/sqrt(p^2+q^2); for e ~ (1, 1) and x = (1, 1),
        # rho = sqrt(2), so floor(rho/0.5) = floor(2 sqrt 2) = 2.
        e = direction_from_pair(1, 1)
        assert tube_index((Fraction(1), Fraction(1)), e, Fraction(1, 2)) == 2


class TestDeltaOneSets:
    def test_single_point(self):
        rep = is_delta_one_set(PointSet(((0.3, 0.4),)), 0.1)
        assert rep["passes"] and rep["a_star"] == 1.0

    def test_collinear_spaced(self):
        P = PointSet(tuple((i * 0.1, 0.0) for i in range(10)))
        rep = is_delta_one_set(P, 0.1)
        assert rep["separated"]
        assert rep["a_star"] <= 3.0

    def test_cluster_fails_small_constant(self):
        P = PointSet(tuple((i * 0.01, 0.0) for i in range(20)))
        rep = is_delta_one_set(P, 0.01, A=1.5)
        assert not rep["passes"]

    def test_separation_detected(self):
        rep = is_delta_one_set(PointSet(((0, 0), (0.001, 0))), 0.1)
        assert not rep["separated"]

    def test_extract_grid(self):
        n = 8
        G = grid(n, spacing=1)
        C = extract_delta_one_subset(G, 1.0, HORIZONTAL)
        assert len(C) == math.ceil(n / 2)

    def test_extract_passes_validator(self):
        import random
        rng = random.Random(11)
        P = PointSet(tuple((rng.random(), rng.random()) for _ in range(500)))
        C = extract_delta_one_subset(P, 1 / 64, HORIZONTAL)
        rep = is_delta_one_set(C, 1 / 64, A=3)
        assert rep["passes"]


class TestCountingEnergy:
    def test_shared_tube(self):
        C = PointSet(((0.11, 0.0), (0.12, 0.0)))
        rep = counting_energy(C, [HORIZONTAL], 0.1)
        assert rep.total == 4
        assert rep.rows[0][2] == 1  # one occupied tube

    def test_separate_tubes(self):
        C = PointSet(((0.11, 0.0), (0.31, 0.0)))
        rep = counting_energy(C, [HORIZONTAL], 0.1)
        assert rep.total == 2

    def test_cauchy_schwarz_certificate(self):
        C = grid(4)
        E = [HORIZONTAL, direction_from_pair(1, 1), direction_from_pair(1, 2)]
        rep = counting_energy(C, E, 0.7)
        for _, _, k, energy, cs in rep.rows:
            assert energy >= cs
            assert cs == Fraction(len(C) ** 2, k)

    def test_csv_header(self):
        rep = counting_energy(PointSet(((0, 0),)), [HORIZONTAL], 0.5)
        assert rep.to_csv().startswith(
            "direction_index,ex,ey,occupied_tubes,energy,cs_lower")


class TestWeightedEnergy:
    def test_single_tube_flat_kernel(self):
        pts = [(0.1, 0.0), (0.15, 0.0)]
        rep = weighted_energy(pts, [0.5, 0.5], [HORIZONTAL], 1.0)
        assert rep.total == pytest.approx(1.0)

    def test_sqrt_kernel_two_atoms(self):
        pts = [(0.0, 0.0), (0.5, 0.0)]
        rep = weighted_energy(pts, [0.5, 0.5], [HORIZONTAL], 1.0,
                              kernel_exponent=0.5)
        assert rep.total == pytest.approx(2 ** -1.5)

    def test_weights_must_normalize(self):
        with pytest.raises(ValueError):
            weighted_energy([(0, 0)], [0.7], [HORIZONTAL], 1.0)


class TestRieszEnergy:
    def test_single_atom(self):
        assert riesz_energy([(0, 0)], [1.0], 1.0) == 0.0

    def test_two_atoms(self):
        assert riesz_energy([(0, 0), (1, 0)], [0.5, 0.5], 1.0) == \
            pytest.approx(0.5)

    def test_scaling_law(self):
        pts = [(0, 0), (1, 0), (0, 1)]
        w = [1 / 3] * 3
        gamma = 0.7
        base = riesz_energy(pts, w, gamma)
        r = 0.25
        scaled = riesz_energy([(r * x, r * y) for x, y in pts], w, gamma)
        assert scaled == pytest.approx(base * r ** (-gamma))

    def test_coincident_atoms_rejected(self):
        with pytest.raises(ValueError):
            riesz_energy([(0, 0), (0, 0)], [0.5, 0.5], 1.0)


class TestMarstrandScan:
    def test_net_size(self):
        delta = 0.1
        net = direction_net(delta)
        assert len(net) == math.ceil(math.pi / delta)

    def test_scan_on_extracted_set(self):
        import random
        rng = random.Random(5)
        P = PointSet(tuple((rng.random(), rng.random()) for _ in range(400)))
        delta = 2 ** -6
        C = extract_delta_one_subset(P, delta, HORIZONTAL)
        out = marstrand_exceptional_scan(C, delta, 0.5)
        assert out["count"] <= 64 * out["bound_denominator"]

    def test_rejects_clustered_input(self):
        P = PointSet(tuple((i * 1e-4, 0.0) for i in range(50)))
        with pytest.raises(ValueError):
            marstrand_exceptional_scan(P, 0.01, 0.5)


class TestBalancedSplit:
    def test_branch1_tight_cluster(self):
        out = balanced_split([0.0, 0.001, 0.002], [0.4, 0.3, 0.3],
                             delta=0.01, split_width=0.1, c=1.0, sigma=0.5)
        assert out["branch"] == 1
        assert out["outside_mass"] <= 1.0 * 0.01 ** 0.5

    def test_branch2_balanced_halves(self):
        out = balanced_split([0.0, 1.0], [0.5, 0.5],
                             delta=0.05, split_width=0.2, c=0.001, sigma=1.0)
        assert out["branch"] == 2
        assert 0.5 <= out["ratio"] <= 2.0


class TestExponentIteration:
    def test_known_limit(self):
        out = exponent_iteration(sigma=1 / 3, gamma=0.5, rho=1.5,
                                 tau0=0.9, n=200)
        assert out["limit"] == pytest.approx(0.5)
        assert out["sequence"][-1] == pytest.approx(0.5, abs=1e-12)

    def test_contraction_to_limit(self):
        out = exponent_iteration(sigma=0.4, gamma=0.6, rho=1.2,
                                 tau0=5.0, n=100)
        assert out["sequence"][-1] == pytest.approx(out["limit"], abs=1e-12)

    def test_distinguished_rho_fixed_point(self):
        for g, s in [(0.9, 0.5), (0.8, 0.7), (0.99, 0.3)]:
            rho = distinguished_rho(s, g)
            assert rho >= 1
            out = exponent_iteration(s, g, rho, tau0=1.0, n=5)
            assert out["limit"] == pytest.approx(estimate_bound1(g, s))

    def test_domain(self):
        with pytest.raises(ValueError):
            exponent_iteration(0.5, 1.0, 1.5, 0.9, 10)
        with pytest.raises(ValueError):
            exponent_iteration(0.5, 0.5, 0.5, 0.9, 10)
