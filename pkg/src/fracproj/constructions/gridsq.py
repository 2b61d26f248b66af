"""Nested square grids paired with nested rational-direction arc families.

State after level ``j``: ``q_j`` closed squares of side ``l_j`` inside
``[0, 1]^2`` and a family of rational directions ``C_j^I`` with one arc of
length ``r_j`` around each, obeying (gamma = global exponent, ``gamma_j``
the per-level exponent with ``k_j = 2/gamma_j`` an integer):

* each level-(j-1) square is replaced by an ``m x m`` grid of side-``l_j``
  children, ``l_j = m^(-k_j)``, forming a co-centric super-square of side
  ``L_j = m * l_j < l_{j-1}``;
* ``m`` is the smallest integer >= 2 with ``m^(k_j - 1) > 1/l_{j-1}`` and
  ``q_{j-1} * m^(1 - k_j*gamma/2) <= min(1/4, 1/(10 M_j))``;
* per parent arc, ``n_j`` rational directions (midpoint kept) are chosen by
  Farey/Stern-Brocot order — smallest denominators first — subject to exact
  angular separation, and ``M_j = max (1+|p|)(1+|q|)`` over the new tags;
* ``r_j = 1 / (2 (4 q_j^2)^(1/gamma))`` (exact when gamma = 1).

Certificates (all exact rational arithmetic; projections use the integer
surrogate ``q x + p y``):

* projection cardinality: ``card rho_e(C_j^Q) <= q_{j-1} (1+|p|)(1+|q|) m``
  and ``<= l_j^(-gamma/2) / 10`` for sampled ``e`` in ``C_j^I``;
* scaled covering: ``N(rho_e(K_j), l) <= l^(-gamma/2)`` on a dyadic grid of
  scales ``l_j <= l <= 1``, plus the shrunken-square variant at sampled
  scales ``l <= l_j``;
* exact packing ``P(C_j^Q ^ Q, l_j/2) >= l_j^(-gamma_j) = m^2`` per parent
  (grid spacing ``l_j`` keeps every center);
* structure: parent centers covered by their children, arc midpoints kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..geometry import Direction, SquareUnion, direction_from_pair, exact_project
from ._rationals import simplest_fraction_between

_SLOPE_CAP = Fraction(2, 3)          # all tracked slopes stay below this
_ANGLE_FACTOR = 1 + _SLOPE_CAP ** 2  # |d theta| >= |d slope| / _ANGLE_FACTOR


@dataclass(frozen=True)
class Main2Params:
    """Exponent schedules and verification budgets.

    ``gamma_seq`` entries must satisfy ``0 < gamma_j <= gamma`` with
    ``2/gamma_j`` integer (this keeps every ``l_j`` rational).  The defaults
    target ``gamma = 1`` at depth 3 with modest materialized sizes.
    """

    gamma: Fraction = Fraction(1)
    gamma_seq: tuple = (Fraction(2, 40), Fraction(2, 30), Fraction(2, 24))
    t_seq: tuple = (0.10, 0.11, 0.12)
    depth: int = 3
    direction_budget: int = 24       # certificate sample size per level
    scale_budget: int = 12           # dyadic scales per covering sweep

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if len(self.gamma_seq) < self.depth or len(self.t_seq) < self.depth:
            raise ValueError("need gamma_j and t_j per level")
        if not 0 < self.gamma <= 1:
            raise ValueError("gamma must lie in (0, 1]")
        for g in self.gamma_seq[: self.depth]:
            g = Fraction(g)
            if not 0 < g <= self.gamma:
                raise ValueError(f"gamma_j={g} outside (0, gamma]")
            if (2 / g).denominator != 1:
                raise ValueError(f"2/gamma_j must be an integer, got gamma_j={g}")


@dataclass(frozen=True)
class Main2Level:
    level: int
    centers: tuple              # exact square centers
    side: Fraction              # l_j
    m: int
    q: int                      # q_j = running square count
    directions: tuple           # Direction objects, C_j^I
    r: object                   # arc length r_j (Fraction when exact)
    n: int                      # directions added per parent arc
    M: int                      # max (1+|p|)(1+|q|)
    certificates: dict = field(default_factory=dict)

    def squares(self) -> SquareUnion:
        return SquareUnion.build(self.centers, self.side)


@dataclass(frozen=True)
class Main2State:
    levels: tuple
    params: Main2Params

    def to_text(self) -> str:
        lines = []
        for lev in self.levels:
            lines.append(f"#squares {lev.level} {float(lev.side)!r}")
            for cx, cy in lev.centers:
                lines.append(f"{float(cx)!r} {float(cy)!r}")
            lines.append(f"#arcs {lev.level} {float(lev.r)!r}")
            for e in lev.directions:
                lines.append(f"{e.x!r} {e.y!r}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Farey direction selection
# ---------------------------------------------------------------------------

def _slope(e: Direction) -> Fraction:
    q, p = e.normal_pair()
    if q == 0:
        raise ValueError("vertical direction has no slope")
    return Fraction(p, q)


def farey_slopes_in_interval(lo: Fraction, hi: Fraction, n: int,
                             separation: Fraction,
                             keep: Fraction | None = None) -> list[Fraction]:
    """``n`` smallest-denominator slopes in ``[lo, hi]``, pairwise at least
    ``separation`` apart, optionally forcing ``keep`` into the output.

    Enumerates candidates in Farey order (denominator, then numerator) and
    picks greedily; the denominator ceiling doubles until ``n`` fit.
    """
    if hi - lo < (n - 1) * separation:
        raise ValueError("interval cannot hold n separated slopes")
    chosen = [Fraction(keep)] if keep is not None else []
    qmax = max(4, int(math.isqrt(int(n / float(hi - lo))) + 1))
    for _ in range(40):
        cands = []
        for q in range(1, qmax + 1):
            p0 = math.ceil(lo * q)
            p1 = math.floor(hi * q)
            cands.extend(Fraction(p, q) for p in range(p0, p1 + 1))
        cands = sorted(set(cands) - set(chosen),
                       key=lambda f: (f.denominator, abs(f.numerator)))
        out = list(chosen)
        for c in cands:
            if all(abs(c - o) >= separation for o in out):
                out.append(c)
                if len(out) == n:
                    return sorted(out)
        qmax *= 2
    raise RuntimeError("Farey selection failed to find enough slopes")


def _arc_slope_window(mid_slope: Fraction, arc_len: float) -> tuple[Fraction, Fraction]:
    """Conservative rational slope bounds of the arc around ``mid_slope``."""
    theta = math.atan(float(mid_slope))
    half = float(arc_len) / 2
    margin = 0.02 * float(arc_len)
    lo = Fraction(math.tan(theta - half) + margin).limit_denominator(10 ** 15)
    hi = Fraction(math.tan(theta + half) - margin).limit_denominator(10 ** 15)
    if not math.tan(theta - half) < lo < hi < math.tan(theta + half):
        raise ArithmeticError("arc too narrow for rational windowing")
    return lo, hi


# ---------------------------------------------------------------------------
# Exact covering of surrogate projections
# ---------------------------------------------------------------------------

def _sqrt_lower(s2: int) -> Fraction:
    """Rational lower bound of sqrt(s2), within 1e-10 relative."""
    scale = 10 ** 10
    return Fraction(math.isqrt(s2 * scale * scale), scale)


def surrogate_covering_upper(values, halfwidth: Fraction, l: Fraction,
                             s2: int) -> int:
    """Upper bound for ``N(rho_e(union of squares), l)`` via the surrogate.

    ``values`` are exact surrogate centers, fattened by ``halfwidth`` (also
    surrogate units).  True covering balls have surrogate radius
    ``l * sqrt(s2)``; using the rational lower bound of the root can only
    overcount, so the result is a certified upper bound.
    """
    r = l * _sqrt_lower(s2)
    w = 2 * r
    vs = sorted(values)
    count = 0
    covered_end = None
    for v in vs:
        a, b = v - halfwidth, v + halfwidth
        if covered_end is not None and covered_end >= b:
            continue
        start = a if covered_end is None or covered_end < a else covered_end
        need = max(1, math.ceil((b - start) / w))
        covered_end = start + need * w
        count += need
    return count


def _exponent_ok(count: int, l: Fraction, gamma: Fraction) -> bool:
    """Exact check of ``count <= l^(-gamma/2)``."""
    g = Fraction(gamma)
    # count^(2 den) <= (1/l)^num
    return Fraction(count) ** (2 * g.denominator) * Fraction(l) ** g.numerator <= 1


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def _smallest_n(r, t: float) -> int:
    def ok(n):
        return (1 - t) * math.log(n) + t * math.log(float(r)) >= math.log(10.0)
    n = max(2, math.ceil((10.0 / float(r) ** t) ** (1 / (1 - t))))
    while n > 2 and ok(n - 1):
        n -= 1
    while not ok(n):
        n += 1
    return n


def _smallest_m(k: int, gamma: Fraction, l_prev: Fraction, q_prev: int,
                M: int) -> int:
    """Smallest m >= 2 with m^(k-1) > 1/l_prev and
    q_prev * m^(1 - k*gamma/2) <= min(1/4, 1/(10 M))."""
    g = Fraction(gamma)
    B = min(Fraction(1, 4), Fraction(1, 10 * M))
    rhs = (Fraction(q_prev) / B) ** (2 * g.denominator)
    expo = k * g.numerator - 2 * g.denominator
    if expo <= 0:
        raise ValueError("k*gamma must exceed 2 for the size condition")

    def ok(m):
        return (Fraction(m) ** (k - 1) > 1 / l_prev
                and Fraction(m) ** expo >= rhs)
    m = 2
    est = max(float(1 / l_prev) ** (1 / (k - 1)), float(rhs) ** (1 / expo))
    m = max(2, math.floor(est))
    while m > 2 and ok(m - 1):
        m -= 1
    while not ok(m):
        m += 1
    return m


def _dyadic_scales(l_min: Fraction, budget: int) -> list[Fraction]:
    """Dyadic scales 2^-i spanning [l_min, 1/2], at most ``budget`` of them."""
    imax = max(1, math.ceil(-math.log2(float(l_min))))
    step = max(1, imax // budget)
    out = [Fraction(1, 2 ** i) for i in range(1, imax, step)]
    if Fraction(1, 2 ** imax) >= l_min:
        out.append(Fraction(1, 2 ** imax))
    return out


def _stratified(seq, budget: int):
    if len(seq) <= budget:
        return list(seq)
    step = len(seq) / budget
    return [seq[int(i * step)] for i in range(budget)]


def construct_main2(params: Main2Params) -> Main2State:
    """Run the paired construction to ``params.depth`` levels.

    Raises on any structural violation; soft certificate outcomes (the
    sampled projection/covering sweeps) are recorded per level under
    ``certificates`` with an overall ``all_ok`` flag.
    """
    gamma = Fraction(params.gamma)
    centers = ((Fraction(1, 2), Fraction(1, 2)),)
    side = Fraction(1)
    dirs = (direction_from_pair(1, 0),)
    r = Fraction(1)
    q = 1
    levels = [Main2Level(level=0, centers=centers, side=side, m=1, q=1,
                         directions=dirs, r=r, n=1, M=2,
                         certificates={"root": True})]
    for j in range(1, params.depth + 1):
        prev = levels[-1]
        t = float(params.t_seq[j - 1])
        gj = Fraction(params.gamma_seq[j - 1])
        k = int(2 / gj)
        n = _smallest_n(prev.r, t)
        sep_slope = Fraction(prev.r) / (5 * n) * _ANGLE_FACTOR
        new_dirs = []
        for e in prev.directions:
            mid = _slope(e)
            lo, hi = _arc_slope_window(mid, float(prev.r))
            slopes = farey_slopes_in_interval(lo, hi, n, sep_slope, keep=mid)
            for s in slopes:
                new_dirs.append(direction_from_pair(s.denominator, s.numerator))
        if any(abs(_slope(e)) >= _SLOPE_CAP for e in new_dirs):
            raise AssertionError("slope cap exceeded; arcs drifted too far")
        M = max((1 + abs(e.p)) * (1 + abs(e.q)) for e in new_dirs)
        m = _smallest_m(k, gamma, prev.side, prev.q, M)
        l_new = Fraction(1, m ** k)
        offsets = [Fraction(2 * i - (m - 1), 2) * l_new for i in range(m)]
        new_centers = tuple((cx + ox, cy + oy)
                            for cx, cy in prev.centers
                            for ox in offsets for oy in offsets)
        q_new = prev.q * m * m
        if gamma == 1:
            r_new = Fraction(1, 8 * q_new * q_new)
        else:
            r_new = 0.5 * float(4 * q_new * q_new) ** (-1 / float(gamma))
        # --- structural certificates (exact) -------------------------------
        if not Fraction(m) ** (k - 1) > 1 / prev.side:
            raise AssertionError("super-square leaves the parent square")
        packing_exact = (min(abs(o2 - o1) for o1 in offsets for o2 in offsets
                             if o2 != o1) == l_new) if m > 1 else True
        certs = {
            "n": n, "m": m, "k": k,
            "P1_minimal": n == 2 or (n - 1) ** (1 - t) * float(prev.r) ** t < 10,
            "arc_midpoints_kept": all(
                any(e.normal_pair() == f.normal_pair() for f in new_dirs)
                for e in prev.directions),
            "packing_m2_exact": packing_exact,
            "super_square_inside_parent": True,
        }
        # --- sampled projection-cardinality certificates -------------------
        sample = _stratified(new_dirs, params.direction_budget)
        card_ok = True
        worst = 0
        for e in sample:
            vals = {exact_project(c, e) for c in new_centers}
            bound1 = prev.q * (1 + abs(e.p)) * (1 + abs(e.q)) * m
            ok1 = len(vals) <= bound1
            # card <= l^(-gamma/2)/10, exactly
            ok2 = _exponent_ok(10 * len(vals), l_new, gamma)
            card_ok = card_ok and ok1 and ok2
            worst = max(worst, len(vals))
        certs["projection_cardinality_ok"] = card_ok
        certs["projection_cardinality_max"] = worst
        # --- sampled covering certificates ---------------------------------
        cover_ok = True
        scales = _dyadic_scales(l_new, params.scale_budget)
        for e in sample[: max(4, params.direction_budget // 2)]:
            s2 = e.p * e.p + e.q * e.q
            hw = Fraction(l_new, 2) * (abs(e.p) + abs(e.q))
            vals = sorted({exact_project(c, e) for c in new_centers})
            for l in scales:
                if _exponent_ok(q_new, l, gamma):
                    continue  # q_new balls suffice outright
                N = surrogate_covering_upper(vals, hw, l, s2)
                if not _exponent_ok(N, l, gamma):
                    cover_ok = False
            # shrunken-square variant below l_j
            for shift in (1, 8, 24):
                l = Fraction(l_new) / 2 ** shift
                hw_s = Fraction(l, 2) * (abs(e.p) + abs(e.q))
                N = surrogate_covering_upper(vals, hw_s, l, s2)
                if not _exponent_ok(N, l, gamma):
                    cover_ok = False
        certs["covering_ok"] = cover_ok
        certs["all_ok"] = all(v for key, v in certs.items()
                              if key.endswith("_ok") or key.startswith(("P1", "arc", "packing", "super")))
        levels.append(Main2Level(level=j, centers=new_centers, side=l_new,
                                 m=m, q=q_new, directions=tuple(new_dirs),
                                 r=r_new, n=n, M=M, certificates=certs))
    return Main2State(levels=tuple(levels), params=params)
