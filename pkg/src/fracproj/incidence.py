"""Exact projection-cardinality analysis of finite planar point sets.

Everything here runs in exact rational arithmetic via the surrogate
``t = q*x + p*y`` for a tagged direction (see :mod:`fracproj.geometry`), so
cardinalities, incidence counts and grid bounds carry no floating-point
coincidence risk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .geometry import Direction, PointSet, direction_from_pair, exact_project


# ---------------------------------------------------------------------------
# Grids and projection cardinalities
# ---------------------------------------------------------------------------

def grid(n: int, spacing=1, origin=(1, 1)) -> PointSet:
    """The n x n point grid homothetic to {1..n} x {1..n}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ox, oy = origin
    return PointSet(tuple((ox + i * spacing, oy + j * spacing)
                          for i in range(n) for j in range(n)))


def projection_cardinality(P: PointSet, e: Direction) -> int:
    """Number of distinct values {x . e : x in P}, exact for tagged e.

    For an untagged (float) direction the projected values are compared with
    a 1e-9 collision guard; near-coincidences raise, demanding exact mode.
    """
    if e.rational:
        q, p = e.normal_pair()
        if all(isinstance(c, int) for pt in P.points for c in pt):
            return len({q * x + p * y for x, y in P.points})
        return len({exact_project(pt, e) for pt in P.points})
    vals = sorted(float(pt[0]) * e.x + float(pt[1]) * e.y for pt in P.points)
    card = 1 if vals else 0
    for a, b in zip(vals, vals[1:]):
        gap = b - a
        if 0 < gap < 1e-9:
            raise ValueError(
                "near-collision below 1e-9 in float mode: use a rational direction")
        if gap > 0:
            card += 1
    return card


def grid_projection_count(n: int, p: int, q: int) -> dict:
    """card rho_e(G_n) for e = c(1, p/q), with the (1+p)(1+q)n bound report
    and the preimage certificate from the enlarged grid.

    For every attained value t, the translates (x, y) + k(p, -q), k = 1..n,
    of a witness point stay inside G_n' = {1..n(1+p)} x {-nq+1..n} and hit
    the same fiber — so each value has >= n preimages in G_n', which forces
    card <= (1+p)(1+q)*n.
    """
    e = direction_from_pair(q, p)
    G = grid(n)
    values = {}
    for pt in G.points:
        values.setdefault(exact_project(pt, e), pt)
    card = len(values)
    bound = (1 + p) * (1 + q) * n
    # preimage certificate (exact, per attained value)
    preimages_ok = True
    for t, (x, y) in values.items():
        for k in range(1, n + 1):
            xx, yy = x + k * p, y - k * q
            if not (1 <= xx <= n * (1 + p) and -n * q + 1 <= yy <= n):
                preimages_ok = False
                break
            if exact_project((xx, yy), e) != t:
                preimages_ok = False
                break
        if not preimages_ok:
            break
    return {"cardinality": card, "bound": bound, "holds": card <= bound,
            "preimage_certificate": preimages_ok}


# ---------------------------------------------------------------------------
# Critical directions and exceptional counts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriticalDirectionSet:
    """Primitive normal forms (a, b) of all directions collapsing some pair."""

    directions: tuple        # Direction objects, deduplicated
    collapsing_pairs: dict   # (q, p) normal pair -> list of point pairs


def critical_directions(P: PointSet) -> CriticalDirectionSet:
    """All primitive directions perpendicular to some difference x - y.

    Projection under any direction *not* listed separates all points, so
    projection_cardinality equals card P off this set by construction.
    """
    if not P.exact:
        raise ValueError("critical directions require exact rational points")
    seen: dict[tuple, list] = {}
    pts = P.points
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            dx = Fraction(pts[j][0]) - Fraction(pts[i][0])
            dy = Fraction(pts[j][1]) - Fraction(pts[i][1])
            if dx == 0 and dy == 0:
                continue
            # integer vector parallel to the difference
            den = dx.denominator * dy.denominator // math.gcd(
                dx.denominator, dy.denominator)
            ax, ay = int(dx * den), int(dy * den)
            # perpendicular to (ax, ay) is (-ay, ax); primitive + antipodal norm
            bx, by = -ay, ax
            g = math.gcd(abs(bx), abs(by))
            bx, by = bx // g, by // g
            if bx < 0 or (bx == 0 and by < 0):
                bx, by = -bx, -by
            seen.setdefault((bx, by), []).append((pts[i], pts[j]))
    dirs = tuple(direction_from_pair(a, b) for a, b in sorted(seen))
    return CriticalDirectionSet(directions=dirs, collapsing_pairs=seen)


def _floor_power(n: int, s) -> int:
    """floor(n**s) exactly, for rational s = a/b, via integer b-th roots.

    Avoids the classic trap where a high-precision n**s lands within 1e-9 of
    an integer (e.g. 9**0.5): the answer is the largest k with k**b <= n**a,
    found by integer binary search — no rounding ambiguity remains.
    """
    frac = Fraction(s).limit_denominator(10 ** 6)
    a, b = frac.numerator, frac.denominator
    target = n ** a
    lo, hi = 0, n ** (a // b + 1) + 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** b <= target:
            lo = mid
        else:
            hi = mid - 1
    return lo


def exceptional_direction_count(P: PointSet, s: float) -> dict:
    """Exact cardinality of {e : card P_e <= n^s} over critical directions.

    Non-critical directions give cardinality n > n^s, so the critical set is
    exhaustive.  Returns witnesses (normal pair + cardinality) and the ratio
    count / n^(2s-1).
    """
    n = len(P)
    if n < 2:
        raise ValueError("need at least 2 points")
    if not (0.5 <= s < 1):
        raise ValueError(f"s={s} outside [1/2, 1)")
    threshold = _floor_power(n, s)
    crit = critical_directions(P)
    witnesses = []
    for e in crit.directions:
        card = projection_cardinality(P, e)
        if card <= threshold:
            witnesses.append((e.normal_pair(), card))
    ratio = len(witnesses) / (n ** (2 * s - 1))
    return {"count": len(witnesses), "witnesses": witnesses,
            "threshold": threshold, "ratio": ratio}


# ---------------------------------------------------------------------------
# Lines, fibers, incidences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LineFamily:
    """Fibers rho_e^{-1}{t} as (direction, exact surrogate offset) pairs."""

    lines: tuple  # ((Direction, Fraction), ...)

    def __post_init__(self):
        per_dir: dict = {}
        for e, t in self.lines:
            key = e.normal_pair() if e.rational else (e.x, e.y)
            if t in per_dir.setdefault(key, set()):
                raise ValueError(f"duplicate offset {t} for direction {key}")
            per_dir[key].add(t)

    def __len__(self):
        return len(self.lines)


def fiber_family(P: PointSet, S) -> LineFamily:
    """All fibers through P in the given directions.

    card L = sum over e of projection_cardinality(P, e).
    """
    lines = []
    for e in S:
        offs = sorted({exact_project(pt, e) for pt in P.points})
        lines.extend((e, t) for t in offs)
    return LineFamily(tuple(lines))


def incidence_count(P: PointSet, L: LineFamily) -> int:
    """Exact number of incident (point, line) pairs."""
    count = 0
    for e, t in L.lines:
        for pt in P.points:
            if exact_project(pt, e) == t:
                count += 1
    return count


def st_bound_check(P: PointSet, L: LineFamily, A: float | None = None) -> dict:
    """Incidences against the A*(m^(2/3) n^(2/3) + m + n) shape.

    Reports the minimal A making the inequality hold; if ``A`` is given,
    whether it suffices.
    """
    n = len(P)
    m = len(L)
    inc = incidence_count(P, L)
    shape = m ** (2 / 3) * n ** (2 / 3) + m + n
    minimal_a = inc / shape if shape > 0 else 0.0
    out = {"incidences": inc, "m": m, "n": n, "shape": shape, "minimal_A": minimal_a}
    if A is not None:
        out["holds"] = inc <= A * shape
    return out
