"""Factorial grid blocks, star products, and their projection combinatorics.

The building blocks live in the closed unit square ``[-1/2, 1/2]^2`` (or the
ball ``B(0, 1/2)``):

* ``Q_1``: the square itself; ``Q_2``: four side-1/4 squares sharing the
  corner at the origin; ``Q_n`` (n >= 3): n^2 squares of side n^-2 on an
  n x n grid of pitch 1/n whose top-left square shares the top-left corner
  of the unit square.
* ``L_n``: (n!)^d squares of side (n!)^-d tiling the vertical column
  ``{0} x [-1/2, 1/2]`` (centers on the y-axis).
* ``U_n = Q_1 * Q_2 * ... * Q_n`` (star product): (n!)^2 squares of side
  (n!)^-2.
* ``B_n``: the balls inscribed in the squares of ``U_n * L_n`` —
  (n!)^(2+d) balls of common **diameter** (n!)^-(2+d).  (Adjacent inscribed
  balls may touch; their interiors stay disjoint.)

The star product ``K1 * K2`` replaces every piece of ``K1`` by an affine
copy of ``K2`` via the no-rotation homothety taking the ambient unit piece
onto that piece.  Piece counts multiply and sizes multiply, so iterated
products reach astronomical cardinalities quickly; every constructor checks
the materialized count against :func:`size_cap` and refuses beyond it.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

import numpy as np

from ..geometry import (
    BallUnion,
    Direction,
    SquareUnion,
    direction_from_pair,
)

DEFAULT_SIZE_CAP = 10 ** 8


def size_cap() -> int:
    """Materialization cap on piece counts (env ``FRACPROJ_SIZE_CAP``)."""
    return int(os.environ.get("FRACPROJ_SIZE_CAP", DEFAULT_SIZE_CAP))


def _check_cap(count: int, what: str):
    cap = size_cap()
    if count > cap:
        raise ValueError(
            f"{what} would materialize {count} pieces, beyond the cap {cap}; "
            "raise FRACPROJ_SIZE_CAP only if you mean it")


# ---------------------------------------------------------------------------
# Star products
# ---------------------------------------------------------------------------

def _check_ball_inside(K: BallUnion):
    r = Fraction(K.radius)
    lim = Fraction(1, 2) - r
    if lim < 0:
        raise ValueError("ball radius exceeds 1/2")
    ll = lim * lim
    for cx, cy in K.centers:
        if Fraction(cx) ** 2 + Fraction(cy) ** 2 > ll:
            raise ValueError(f"ball at {(cx, cy)} leaves B(0, 1/2)")


def star_product(K1: BallUnion, K2: BallUnion) -> BallUnion:
    """Replace each ball ``B`` of ``K1`` by ``T_B(K2)``.

    ``T_B`` is the no-rotation homothety of ratio ``2 r1`` taking
    ``B(0, 1/2)`` onto ``B``; both factors must lie in ``B(0, 1/2)``.
    The result has ``len(K1) * len(K2)`` balls of radius ``2 r1 r2``.

    >>> K = BallUnion.build([(Fraction(-1, 4), 0), (Fraction(1, 4), 0)],
    ...                     Fraction(1, 4))
    >>> KK = star_product(K, K)
    >>> len(KK), KK.radius
    (4, Fraction(1, 8))
    """
    _check_ball_inside(K1)
    _check_ball_inside(K2)
    _check_cap(len(K1) * len(K2), "star product")
    s = 2 * Fraction(K1.radius)
    centers = [(c1[0] + s * c2[0], c1[1] + s * c2[1])
               for c1 in K1.centers for c2 in K2.centers]
    return BallUnion.build(centers, s * Fraction(K2.radius))


def _check_square_inside(K: SquareUnion):
    h = Fraction(K.side) / 2
    lim = Fraction(1, 2) - h
    if lim < 0:
        raise ValueError("square side exceeds 1")
    for cx, cy in K.centers:
        if abs(Fraction(cx)) > lim or abs(Fraction(cy)) > lim:
            raise ValueError(f"square at {(cx, cy)} leaves [-1/2, 1/2]^2")


def star_product_squares(K1: SquareUnion, K2: SquareUnion) -> SquareUnion:
    """Square variant: ``T_Q`` maps ``[-1/2, 1/2]^2`` onto the square ``Q``.

    Sides multiply: the result has ``len(K1) * len(K2)`` squares of side
    ``s1 * s2``.
    """
    _check_square_inside(K1)
    _check_square_inside(K2)
    _check_cap(len(K1) * len(K2), "star product")
    s = Fraction(K1.side)
    centers = [(c1[0] + s * c2[0], c1[1] + s * c2[1])
               for c1 in K1.centers for c2 in K2.centers]
    return SquareUnion.build(centers, s * Fraction(K2.side))


def star_power(K, m: int):
    """m-fold star product of ``K`` with itself (m >= 1)."""
    if m < 1:
        raise ValueError("power must be >= 1")
    prod = star_product_squares if isinstance(K, SquareUnion) else star_product
    _check_cap(len(K) ** m, "star power")
    out = K
    for _ in range(m - 1):
        out = prod(out, K)
    return out


def skeleton(K):
    """The set of piece centers, as a :class:`~fracproj.geometry.PointSet`."""
    return K.skeleton()


# ---------------------------------------------------------------------------
# Blocks
# ---------------------------------------------------------------------------

def block_Q(n: int) -> SquareUnion:
    """The n-th grid block inside ``[-1/2, 1/2]^2``.

    ``Q_1`` is the square itself.  ``Q_2`` is the four squares of side 1/4
    sharing the corner at the origin.  For n >= 3, ``Q_n`` is the n x n grid
    of squares of side ``n^-2`` at pitch ``1/n``, the top-left square sharing
    the top-left corner of the ambient square.

    >>> len(block_Q(3)), block_Q(3).side
    (9, Fraction(1, 9))
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return SquareUnion.build([(Fraction(0), Fraction(0))], Fraction(1))
    if n == 2:
        e = Fraction(1, 8)
        return SquareUnion.build(
            [(sx * e, sy * e) for sx in (-1, 1) for sy in (-1, 1)],
            Fraction(1, 4))
    half = Fraction(1, 2)
    inset = Fraction(1, 2 * n * n)
    xs = [-half + inset + Fraction(i, n) for i in range(n)]
    ys = [half - inset - Fraction(j, n) for j in range(n)]
    return SquareUnion.build([(x, y) for x in xs for y in ys],
                             Fraction(1, n * n))


def block_L(n: int, d: int) -> SquareUnion:
    """(n!)^d squares of side (n!)^-d tiling the vertical mid-column."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    m = math.factorial(n) ** d
    _check_cap(m, f"L_{n} with d={d}")
    half = Fraction(1, 2)
    return SquareUnion.build(
        [(Fraction(0), -half + Fraction(2 * k - 1, 2 * m)) for k in range(1, m + 1)],
        Fraction(1, m))


def block_U(n: int) -> SquareUnion:
    """``Q_1 * Q_2 * ... * Q_n``: (n!)^2 squares of side (n!)^-2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_cap(math.factorial(n) ** 2, f"U_{n}")
    out = block_Q(1)
    for j in range(2, n + 1):
        out = star_product_squares(out, block_Q(j))
    return out


def block_B(n: int, d: int) -> BallUnion:
    """Balls inscribed in the squares of ``U_n * L_n``.

    (n!)^(2+d) balls of common diameter (n!)^-(2+d); ``B_0 = B(0, 1/2)``.

    >>> len(block_B(1, 3)), block_B(1, 3).radius
    (1, Fraction(1, 2))
    """
    if n == 0:
        return BallUnion.build([(Fraction(0), Fraction(0))], Fraction(1, 2))
    _check_cap(math.factorial(n) ** (2 + d), f"B_{n} with d={d}")
    UL = star_product_squares(block_U(n), block_L(n, d))
    return BallUnion.build(UL.centers, Fraction(UL.side) / 2)


# ---------------------------------------------------------------------------
# Direction families
# ---------------------------------------------------------------------------

def direction_D_single(n: int, d: int, k: int,
                       base: Direction | None = None) -> Direction:
    """The k-th member of ``D_n``: the unit vector along ``(k, (n!)^d)``,
    optionally rotated so that the family clusters around ``base``.

    For a rationally-tagged ``base`` the rotation is exact: with base
    parallel to the primitive vector (q, p), the rotated member is parallel
    to the integer vector ``(p*k + q*M, p*M - q*k)`` where ``M = (n!)^d``.
    """
    if not 1 <= k <= math.factorial(n) ** (d - 3):
        raise ValueError(f"k={k} outside 1..(n!)^(d-3)")
    M = math.factorial(n) ** d
    if base is None:
        return direction_from_pair(k, M)
    if not base.rational:
        raise ValueError("base direction must carry a rational tag")
    q, p = base.normal_pair()
    return direction_from_pair(p * k + q * M, p * M - q * k)


def directions_D(n: int, d: int, base: Direction | None = None) -> list[Direction]:
    """The full family ``D_n``: (n!)^(d-3) near-``base`` directions.

    Every member lies within ``2 (n!)^-3`` of the base direction (checked),
    and consecutive members are ``~ (n!)^-d`` apart.  Requires n >= 3 and
    d >= 3; the family is subject to :func:`size_cap`.
    """
    if n < 3 or d < 3:
        raise ValueError("need n >= 3 and d >= 3")
    count = math.factorial(n) ** (d - 3)
    _check_cap(count, f"D_{n} with d={d}")
    out = [direction_D_single(n, d, k, base) for k in range(1, count + 1)]
    bx, by = (0.0, 1.0) if base is None else (base.x, base.y)
    tol = 2.0 * math.factorial(n) ** -3 + 1e-12
    for e in out:
        off = min(math.hypot(e.x - bx, e.y - by), math.hypot(e.x + bx, e.y + by))
        if off > tol:
            raise AssertionError(f"direction {e} strays {off} from base")
    return out


# ---------------------------------------------------------------------------
# Exact line-intersection combinatorics of the B_n skeletons
# ---------------------------------------------------------------------------

def _skeleton_scaled(n: int, d: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Skeleton of B_n as integer coordinate arrays at denominator
    ``D = 2 (n!)^(2+d)``.

    Exploits the product structure: the skeleton is (U_n centers) + scaled
    (L_n centers), i.e. each U-center spawns a vertical run of (n!)^d points
    with odd integer y-offsets in the scaled coordinates.
    """
    f = math.factorial(n)
    M = f ** d
    D = 2 * f ** (2 + d)
    _check_cap(f ** (2 + d), f"skeleton of B_{n} with d={d}")
    U = block_U(n)
    xs_u = np.array([int(Fraction(c[0]) * D) for c in U.centers], dtype=np.int64)
    ys_u = np.array([int(Fraction(c[1]) * D) for c in U.centers], dtype=np.int64)
    odd = np.arange(1 - M, M, 2, dtype=np.int64)  # (2k-1) - M, k = 1..M
    xs = np.repeat(xs_u, M)
    ys = (ys_u[:, None] + odd[None, :]).ravel()
    return xs, ys, D


def verify_skeleton_columns(n: int, d: int) -> dict:
    """Check the vertical-line normal form of the B_n skeleton.

    Every skeleton x-coordinate equals ``(r + 1/2)(n!)^-2`` for an integer
    ``r``, and exactly ``n!`` distinct columns occur.
    """
    f = math.factorial(n)
    U = block_U(n)
    xs = sorted({Fraction(c[0]) for c in U.centers})
    form_ok = all((x * 2 * f * f).denominator == 1 and (x * 2 * f * f) % 2 != 0
                  for x in xs)
    return {"n_columns": len(xs), "expected_columns": f,
            "columns_ok": len(xs) == f, "normal_form_ok": form_ok}


def verify_line_intersect(n: int, d: int) -> dict:
    """The slope-family line count: for each k = 1..(n!)^(d-3), every line of
    slope ``-k (n!)^-d`` through a point of the B_n skeleton S_n meets the
    enlarged skeleton ``S_n+ = S_n  u  (S_n +- (0, (n!)^-2))`` in exactly
    ``n!`` points, and the number of distinct lines (equivalently, the
    projection cardinality along the perpendicular direction) is at most
    ``3 (n!)^(1+d)``.

    All arithmetic is integer (coordinates scaled by ``2 (n!)^(2+d)``).
    """
    f = math.factorial(n)
    M = f ** d
    xs, ys, _ = _skeleton_scaled(n, d)
    # x is divisible by (n!)^d in scaled units: x = (2r+1) (n!)^d
    xq = xs // M
    if not np.array_equal(xq * M, xs):
        raise AssertionError("skeleton x-coordinates break the column normal form")
    shift = np.int64(2 * M)  # (n!)^-2 in scaled units
    per_k = []
    ok = True
    for k in range(1, f ** (d - 3) + 1):
        # scaled intercept of the slope -k (n!)^-d line through (x, y)
        base = ys + k * xq
        lines = np.unique(base)
        counts = np.zeros(len(lines), dtype=np.int64)
        for s in (-shift, np.int64(0), shift):
            idx = np.searchsorted(lines, base + s)
            idx_clipped = np.minimum(idx, len(lines) - 1)
            hit = lines[idx_clipped] == base + s
            counts += np.bincount(idx_clipped[hit], minlength=len(lines))
        exact = bool(np.all(counts == f))
        bound = 3 * f ** (1 + d)
        per_k.append({"k": k, "lines": int(len(lines)),
                      "intersection_exact": exact,
                      "cardinality_bound_ok": len(lines) <= bound})
        ok = ok and exact and len(lines) <= bound
    return {"holds": ok, "per_k": per_k,
        "columns": verify_skeleton_columns(n, d)}


def verify_column_richness(n: int, d: int) -> bool:
    """Exhaustive check of vertical richness on small blocks: for every
    skeleton point (x_o, y_o) of S_n, every column x_j, and every integer
    ``|s| <= (n!)^d``, the point ``(x_j, y_o + s (n!)^-(2+d))`` lies in the
    enlarged skeleton S_n+.
    """
    f = math.factorial(n)
    M = f ** d
    xs, ys, _ = _skeleton_scaled(n, d)
    shift = np.int64(2 * M)
    # scaled step (n!)^-(2+d) -> 2; required offsets 2s, |s| <= (n!)^d
    offsets = np.arange(-2 * M, 2 * M + 1, 2, dtype=np.int64)
    required = np.unique(ys)[:, None] + offsets[None, :]
    for x in np.unique(xs):
        col = ys[xs == x]
        col_plus = np.unique(np.concatenate([col, col + shift, col - shift]))
        idx = np.minimum(np.searchsorted(col_plus, required), len(col_plus) - 1)
        if not np.all(col_plus[idx] == required):
            return False
    return True
