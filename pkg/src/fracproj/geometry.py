"""Exact planar primitives.

Points are plain ``(x, y)`` pairs whose coordinates are either floats or
exact rationals (:class:`fractions.Fraction` / ``int``).  Directions on the
circle optionally carry a *rational tag* ``(p, q)`` meaning

    e = c * (1, p/q),   c = (1 + p^2 q^-2)^(-1/2),

i.e. the unit vector proportional to ``(q, p)``.  For a tagged direction the
projection ``x . e`` equals ``(q*x + p*y) / sqrt(p^2 + q^2)``; the integer
combination ``q*x + p*y`` is used as an exact *surrogate* wherever only
cardinalities, orderings or scale-invariant counts matter.

Directions are identified antipodally (``e ~ -e``) throughout: projections
under ``e`` and ``-e`` are mirror images with identical covering numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

FLOAT_TOL = 1e-12


def _as_exact(v):
    """Coerce ints/Fractions through; reject floats that are not integral."""
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    f = Fraction(v)
    return f


# ---------------------------------------------------------------------------
# Directions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Direction:
    """Unit vector on S^1, optionally with an exact rational tag.

    ``x*x + y*y == 1`` within 1e-12.  If the tag ``(p, q)`` is present,
    ``(x, y)`` is the positive normalization of ``(q, p)`` and
    ``gcd(|p|, |q|) == 1``.  ``q == 0`` encodes the vertical direction
    ``(0, 1)`` with surrogate ``y``.
    """

    x: float
    y: float
    p: int | None = None
    q: int | None = None

    def __post_init__(self):
        n = self.x * self.x + self.y * self.y
        if abs(n - 1.0) > 1e-9:
            raise ValueError(f"direction not unit-norm: ({self.x}, {self.y})")

    @property
    def rational(self) -> bool:
        return self.p is not None

    def normal_pair(self) -> tuple[int, int]:
        """The primitive integer vector (q, p) this direction is parallel to."""
        if not self.rational:
            raise ValueError("direction carries no rational tag")
        return (self.q, self.p)

    def antipode(self) -> "Direction":
        return Direction(-self.x, -self.y, None if self.p is None else -self.p,
                         None if self.q is None else -self.q)

    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def perp(self) -> "Direction":
        """Counter-clockwise perpendicular (rational tag preserved)."""
        if self.rational:
            # e ~ (q, p)  =>  perp ~ (-p, q); tag stores (q', p') = (-p, q)
            return direction_from_pair(-self.p, self.q)
        return Direction(-self.y, self.x)


def direction_from_pair(a: int, b: int) -> Direction:
    """Unit direction parallel to the integer vector ``(a, b)``.

    Normalized antipodally: first nonzero coordinate of ``(a, b)`` positive,
    gcd reduced.  Tag convention: vector ``(q, p) = (a, b)``.
    """
    if a == 0 and b == 0:
        raise ValueError("zero vector has no direction")
    g = math.gcd(abs(a), abs(b))
    a, b = a // g, b // g
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    h = math.hypot(a, b)
    return Direction(a / h, b / h, p=b, q=a)


def rational_direction(p: int, q: int) -> Direction:
    """The direction ``c(1, p/q)`` with gcd-reduced, antipodally normalized tag.

    Raises
    ------
    ValueError
        if ``q == 0``; use :data:`VERTICAL` for ``(0, 1)`` directly.
    """
    if q == 0:
        raise ValueError("vertical direction: use unit vector (0,1) directly")
    return direction_from_pair(q, p)


#: The vertical direction (0, 1); exact surrogate is the y-coordinate.
VERTICAL = Direction(0.0, 1.0, p=1, q=0)

#: The horizontal direction (1, 0).
HORIZONTAL = direction_from_pair(1, 0)


def direction_from_angle(theta: float) -> Direction:
    d = Direction(math.cos(theta), math.sin(theta))
    if d.x < 0 or (d.x == 0 and d.y < 0):
        d = Direction(-d.x, -d.y)
    return d


# ---------------------------------------------------------------------------
# Projection
# ---------------------------------------------------------------------------

def project(point: Sequence, e: Direction) -> float:
    """rho_e(x) = x . e as a float."""
    return float(point[0]) * e.x + float(point[1]) * e.y


def exact_project(point: Sequence, e: Direction) -> Fraction:
    """Exact rational surrogate ``q*x + p*y`` of the projection.

    Equals ``rho_e(point) * sqrt(p^2 + q^2)``; the positive scale factor is
    shared by all points, so orderings, cardinalities, and covering counts at
    correspondingly scaled resolutions are preserved exactly.
    """
    q, p = e.normal_pair()
    return Fraction(point[0]) * q + Fraction(point[1]) * p


def surrogate_scale_sq(e: Direction) -> int:
    """``p^2 + q^2``: squared ratio between surrogate and true projection."""
    q, p = e.normal_pair()
    return p * p + q * q


# ---------------------------------------------------------------------------
# Rotations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Rotation:
    """Orientation-preserving planar rotation given by its matrix columns."""

    c: float  # cos(theta)
    s: float  # sin(theta)

    def __call__(self, point: Sequence) -> tuple[float, float]:
        x, y = float(point[0]), float(point[1])
        return (self.c * x - self.s * y, self.s * x + self.c * y)

    def inverse(self) -> "Rotation":
        return Rotation(self.c, -self.s)

    def apply_direction(self, e: Direction) -> Direction:
        x, y = self(( e.x, e.y ))
        h = math.hypot(x, y)
        return Direction(x / h, y / h)


def rotate_to(e: Direction) -> Rotation:
    """The rotation R_e taking (0, 1) to e.

    R_e(0,1) = (e.x, e.y) forces the matrix [[e.y, e.x], [-e.x, e.y]].
    """
    return Rotation(c=e.y, s=-e.x)


# ---------------------------------------------------------------------------
# Balls / squares / point sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: Fraction

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")


def _dist_sq(a, b):
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    return dx * dx + dy * dy


@dataclass(frozen=True)
class BallUnion:
    """Finite union of closed balls with a common radius.

    ``centers`` are exact rational pairs for rationally-constructed
    generations; interiors must be pairwise disjoint (center distance
    >= 2 * radius), checked exactly in rational mode when ``check=True``.
    """

    centers: tuple
    radius: Fraction
    checked_disjoint: bool = False

    @staticmethod
    def build(centers: Iterable, radius, check: bool = False) -> "BallUnion":
        centers = tuple((c[0], c[1]) for c in centers)
        radius = Fraction(radius) if not isinstance(radius, float) else radius
        if radius <= 0:
            raise ValueError("radius must be positive")
        if check:
            rr = 4 * radius * radius
            cs = sorted(centers)
            for i, a in enumerate(cs):
                for b in cs[i + 1:]:
                    if b[0] - a[0] >= 2 * radius:
                        break
                    if _dist_sq(a, b) < rr:
                        raise ValueError(
                            f"ball interiors overlap: {a} vs {b} at radius {radius}")
        return BallUnion(centers, radius, checked_disjoint=check)

    def __len__(self):
        return len(self.centers)

    def skeleton(self) -> "PointSet":
        return PointSet(self.centers)

    def bounding_radius(self):
        """max |c| + r over the balls (exact comparison not needed)."""
        m = max(math.hypot(float(c[0]), float(c[1])) for c in self.centers)
        return m + float(self.radius)


@dataclass(frozen=True)
class SquareUnion:
    """Finite union of closed axis-aligned squares with a common side."""

    centers: tuple
    side: Fraction

    @staticmethod
    def build(centers: Iterable, side) -> "SquareUnion":
        centers = tuple((c[0], c[1]) for c in centers)
        if side <= 0:
            raise ValueError("side must be positive")
        return SquareUnion(centers, side)

    def __len__(self):
        return len(self.centers)

    def skeleton(self) -> "PointSet":
        return PointSet(self.centers)


@dataclass(frozen=True)
class PointSet:
    """Finite planar point cloud; exact mode iff all coordinates are rational."""

    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple((p[0], p[1]) for p in self.points))

    def __len__(self):
        return len(self.points)

    @property
    def exact(self) -> bool:
        return all(not isinstance(c, float) for p in self.points for c in p)

    def check_distinct(self):
        if len(set(self.points)) != len(self.points):
            raise ValueError("duplicate points in exact point set")


# ---------------------------------------------------------------------------
# Interval unions (1-D projection images)
# ---------------------------------------------------------------------------

class IntervalUnion:
    """Sorted, merged union of closed intervals [a, b], a <= b.

    >>> IntervalUnion([(0, 1), (0.5, 2)]).intervals
    ((0, 2),)
    >>> IntervalUnion([(3, 4), (0, 1)]).intervals
    ((0, 1), (3, 4))
    """

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable):
        merged = []
        for a, b in sorted(intervals):
            if b < a:
                raise ValueError(f"interval with b < a: ({a}, {b})")
            if merged and a <= merged[-1][1]:
                if b > merged[-1][1]:
                    merged[-1] = (merged[-1][0], b)
            else:
                merged.append((a, b))
        self.intervals = tuple(merged)

    def __len__(self):
        return len(self.intervals)

    def __eq__(self, other):
        return isinstance(other, IntervalUnion) and self.intervals == other.intervals

    def __repr__(self):
        return f"IntervalUnion({list(self.intervals)!r})"

    def total_length(self):
        return sum(b - a for a, b in self.intervals)

    def scale(self, r) -> "IntervalUnion":
        if r <= 0:
            raise ValueError("scale factor must be positive")
        return IntervalUnion([(a * r, b * r) for a, b in self.intervals])

    def translate(self, v) -> "IntervalUnion":
        return IntervalUnion([(a + v, b + v) for a, b in self.intervals])


def project_union(K, e: Direction) -> IntervalUnion:
    """Project a BallUnion or SquareUnion to the line spanned by ``e``.

    Ball of radius r projects to an interval of half-width r; a square of
    side s to half-width (s/2)(|e.x| + |e.y|).  Output intervals are merged.
    """
    if isinstance(K, BallUnion):
        if not K.centers:
            return IntervalUnion([])
        h = float(K.radius)
        return IntervalUnion([(project(c, e) - h, project(c, e) + h)
                              for c in K.centers])
    if isinstance(K, SquareUnion):
        h = 0.5 * float(K.side) * (abs(e.x) + abs(e.y))
        return IntervalUnion([(project(c, e) - h, project(c, e) + h)
                              for c in K.centers])
    if isinstance(K, PointSet):
        return IntervalUnion([(project(p, e), project(p, e)) for p in K.points])
    raise TypeError(f"cannot project {type(K).__name__}")


def exact_project_union(K, e: Direction) -> IntervalUnion:
    """Like :func:`project_union` but in exact surrogate coordinates.

    The output lives on the surrogate axis: true values times
    ``sqrt(surrogate_scale_sq(e))``.  Square half-widths scale to the rational
    value (s/2)(|q| + |p|); a ball's half-width would scale to the irrational
    r*sqrt(p^2+q^2), so only square and point inputs are accepted here.
    """
    q, p = e.normal_pair()
    if isinstance(K, SquareUnion):
        h = Fraction(K.side, 2) * (abs(q) + abs(p))
        return IntervalUnion([(exact_project(c, e) - h, exact_project(c, e) + h)
                              for c in K.centers])
    if isinstance(K, PointSet):
        return IntervalUnion([(exact_project(c, e), exact_project(c, e))
                              for c in K.points])
    raise TypeError("exact surrogate projection supports squares and points")


# ---------------------------------------------------------------------------
# Arcs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Arc:
    """Closed arc on S^1 given by midpoint direction and arc length."""

    midpoint: Direction
    length: float

    def __post_init__(self):
        if not (0 < float(self.length) <= 2 * math.pi):
            raise ValueError("arc length must lie in (0, 2*pi]")

    def contains_angle(self, theta: float, slack: float = 0.0) -> bool:
        mid = self.midpoint.angle()
        d = (theta - mid + math.pi) % (2 * math.pi) - math.pi
        return abs(d) <= float(self.length) / 2 + slack

    def contains(self, e: Direction, slack: float = 0.0) -> bool:
        """Antipodal-aware membership test."""
        return (self.contains_angle(e.angle(), slack)
                or self.contains_angle(e.angle() + math.pi, slack))

    def sample(self, k: int) -> list[Direction]:
        """k directions evenly spread over the arc (endpoints included)."""
        mid = self.midpoint.angle()
        half = float(self.length) / 2
        if k == 1:
            return [self.midpoint]
        return [direction_from_angle(mid - half + i * 2 * half / (k - 1))
                for i in range(k)]


@dataclass(frozen=True)
class ArcFamily:
    level: int
    arcs: tuple

    def __len__(self):
        return len(self.arcs)


def homothety(point, r, v):
    """h(x) = r*x + v, exact when inputs are rational."""
    return (r * point[0] + v[0], r * point[1] + v[1])
