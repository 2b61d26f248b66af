"""Covering number N(B, delta), packing number P(B, delta), dimension slopes.

Convention (prominent, since literature varies): **N uses balls of radius
delta**, i.e. intervals of length 2*delta in 1-D.  P counts centers with
pairwise distance >= 2*delta.  In 1-D both greedy computations are exact
optima; in 2-D an exact minimum cover is NP-hard, so the canonical
substitute is the delta-mesh count M with the closed-cell boundary
convention, satisfying N(K, delta) <= M <= 4 * N(K, delta/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .geometry import BallUnion, IntervalUnion, PointSet, SquareUnion


def _ceil_div(num, den):
    """ceil(num/den) for exact types and floats alike."""
    q = num / den
    c = math.ceil(q)
    return c


# ---------------------------------------------------------------------------
# 1-D: exact greedy covering and packing
# ---------------------------------------------------------------------------

def covering_number_1d(U: IntervalUnion, delta) -> int:
    """Minimal number of closed radius-``delta`` balls covering ``U``.

    Left-to-right greedy placement, which is optimal in 1-D.  A ball placed
    with left end at x covers the closed interval [x, x + 2*delta].

    >>> covering_number_1d(IntervalUnion([(0, 1)]), Fraction(1, 4))
    2
    >>> covering_number_1d(IntervalUnion([(0, 1), (1.2, 1.4)]), 0.1)
    6
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    count = 0
    covered_end = None  # right end of the last placed ball
    w = 2 * delta
    for a, b in U.intervals:
        if covered_end is not None and covered_end >= b:
            continue
        if covered_end is None or covered_end < a:
            # fresh component: first ball starts at a
            need = _ceil_div(b - a, w) if b > a else 1
            covered_end = a + need * w
        else:
            # (covered_end, b] remains; balls may start at covered_end
            need = _ceil_div(b - covered_end, w)
            covered_end = covered_end + need * w
        count += need
    return count


def packing_number_1d(U: IntervalUnion, delta) -> int:
    """Maximal number of centers in ``U`` with pairwise distance >= 2*delta.

    Leftmost-first greedy, optimal in 1-D.

    >>> packing_number_1d(IntervalUnion([(0, 1)]), Fraction(1, 4))
    3
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    count = 0
    last = None
    w = 2 * delta
    for a, b in U.intervals:
        x = a if last is None else max(a, last + w)
        while x <= b:
            count += 1
            last = x
            x = last + w
    return count


def covering_number_1d_points(values, delta) -> int:
    """N of a finite value set on the line (degenerate intervals)."""
    vs = sorted(values)
    if not vs:
        return 0
    count = 0
    covered_end = None
    w = 2 * delta
    for v in vs:
        if covered_end is None or v > covered_end:
            count += 1
            covered_end = v + w
    return count


# ---------------------------------------------------------------------------
# 2-D: mesh counting and greedy packing
# ---------------------------------------------------------------------------

def _axis_cell_range(lo, hi, delta):
    """Closed cells [i*delta, (i+1)*delta] meeting the closed interval [lo, hi].

    Boundary convention: a value on a cell edge occupies both touching cells.
    """
    qlo = lo / delta
    qhi = hi / delta
    ilo = math.floor(qlo)
    if qlo == ilo:  # exactly on an edge: previous cell touches too
        ilo -= 1
    ihi = math.floor(qhi)
    return range(ilo, ihi + 1)


def _cell_distance_sq(cx, cy, ix, iy, delta):
    """Squared distance from point (cx, cy) to cell [ix..ix+1]x[iy..iy+1]*delta."""
    lox, hix = ix * delta, (ix + 1) * delta
    loy, hiy = iy * delta, (iy + 1) * delta
    dx = lox - cx if cx < lox else (cx - hix if cx > hix else 0)
    dy = loy - cy if cy < loy else (cy - hiy if cy > hiy else 0)
    return dx * dx + dy * dy


def covering_number_2d(K, delta, mode: str = "mesh") -> int:
    """Number of closed delta-mesh cells meeting K (mode="mesh", exact), or a
    ball-cover upper bound for N(K, delta) (mode="greedy").

    Each occupied cell has circumradius delta/sqrt(2) < delta, so one
    delta-ball per occupied cell is a valid cover; greedy mode returns that
    count (an upper bound for the true minimum).
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    cells = set()
    if isinstance(K, PointSet):
        for x, y in K.points:
            for ix in _axis_cell_range(x, x, delta):
                for iy in _axis_cell_range(y, y, delta):
                    cells.add((ix, iy))
    elif isinstance(K, (BallUnion, SquareUnion)):
        if isinstance(K, BallUnion):
            h = K.radius
            round_shape = True
        else:
            h = K.side / 2 if not isinstance(K.side, float) else K.side / 2
            round_shape = False
        rr = h * h
        for cx, cy in K.centers:
            for ix in _axis_cell_range(cx - h, cx + h, delta):
                for iy in _axis_cell_range(cy - h, cy + h, delta):
                    if round_shape and _cell_distance_sq(cx, cy, ix, iy, delta) > rr:
                        continue
                    cells.add((ix, iy))
    else:
        raise TypeError(f"cannot mesh-count {type(K).__name__}")
    if mode == "mesh":
        return len(cells)
    if mode == "greedy":
        return len(cells)  # documented upper bound: one delta-ball per cell
    raise ValueError(f"unknown mode {mode!r}")


def mesh_count_1d(U: IntervalUnion, delta) -> int:
    """Occupied closed 1-D delta-cells [i*delta, (i+1)*delta] (exact).

    This is the 1-D factor in the finite-scale product inequality
    N_mesh(K, delta) <= N_mesh,1d(K_e, delta) * N_mesh,1d(K_xi, delta).
    """
    cells = set()
    for a, b in U.intervals:
        cells.update(_axis_cell_range(a, b, delta))
    return len(cells)


def packing_number_2d(K: PointSet, delta) -> tuple[int, bool]:
    """Greedy (insertion-order) packing lower bound for P(K, delta).

    Returns ``(count, exact)`` where ``exact`` is True when every input point
    was kept (pairwise distances >= 2*delta), in which case the greedy count
    equals P(K, delta) exactly — the case for the grid-structured midpoint
    sets produced by the constructions.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    kept = []
    ww = 4 * delta * delta
    for pnt in K.points:
        ok = True
        for r in kept:
            dx = pnt[0] - r[0]
            dy = pnt[1] - r[1]
            if dx * dx + dy * dy < ww:
                ok = False
                break
        if ok:
            kept.append(pnt)
    return len(kept), len(kept) == len(K.points)


# ---------------------------------------------------------------------------
# Scale profiles and slope estimation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScaleProfile:
    """Rows (delta, N, P or None) with strictly decreasing delta."""

    entries: tuple

    def __post_init__(self):
        ds = [float(e[0]) for e in self.entries]
        if any(b >= a for a, b in zip(ds, ds[1:])):
            raise ValueError("deltas must be strictly decreasing")

    def to_csv(self) -> str:
        lines = ["delta,N,P"]
        for e in self.entries:
            d, n = e[0], e[1]
            p = e[2] if len(e) > 2 and e[2] is not None else ""
            lines.append(f"{d},{n},{p}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DimensionEstimate:
    slope: float
    intercept: float
    residual: float
    limsup_proxy: float
    scale_range: tuple
    clamped: bool = False


def estimate_box_dimension(profile: ScaleProfile, ambient_dim: int = 2) -> DimensionEstimate:
    """Least-squares slope of log N against -log delta, plus the max
    single-scale ratio as a finite-scale limsup proxy.

    The slope is clamped to [0, ambient_dim] with ``clamped=True`` if the
    regression exits that range.
    """
    if len(profile.entries) < 3:
        raise ValueError("need at least 3 scales for a slope estimate")
    x = np.array([-math.log(float(e[0])) for e in profile.entries])
    y = np.array([math.log(max(1, int(e[1]))) for e in profile.entries])
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), res, *_ = np.linalg.lstsq(A, y, rcond=None)
    residual = float(res[0]) if len(res) else 0.0
    ratios = [yy / xx for xx, yy in zip(x, y) if xx > 0]
    proxy = max(ratios) if ratios else 0.0
    clamped = False
    s = float(slope)
    if s < 0 or s > ambient_dim:
        s = min(max(s, 0.0), float(ambient_dim))
        clamped = True
    return DimensionEstimate(
        slope=s, intercept=float(intercept), residual=residual,
        limsup_proxy=proxy,
        scale_range=(float(profile.entries[-1][0]), float(profile.entries[0][0])),
        clamped=clamped)


# ---------------------------------------------------------------------------
# Direction sweeps
# ---------------------------------------------------------------------------

def direction_sweep(K, directions, deltas) -> list[tuple]:
    """Rows (direction_index, delta_index, N, P) for the 1-D projections.

    Deterministic row order (direction index, then delta index) regardless of
    how the cells are evaluated.
    """
    from .geometry import project_union
    rows = []
    for i, e in enumerate(directions):
        U = project_union(K, e)
        for j, d in enumerate(deltas):
            rows.append((i, j, covering_number_1d(U, d), packing_number_1d(U, d)))
    return rows
