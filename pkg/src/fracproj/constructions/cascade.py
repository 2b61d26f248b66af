"""Ball cascade with prescribed projection content along a dense direction set.

Starting from ``B(0, 1/2)``, pairs ``(e_m, n)`` are visited in the diagonal
order ``(e_1,1); (e_1,2), (e_2,1); (e_1,3), (e_2,2), (e_3,1); ...`` so that
every direction index recurs with every exponent index.  A step at
``(e_m, n)`` splits each current ball of diameter ``d`` into ``q`` balls of
diameter ``d/q`` lined up along the diameter perpendicular to ``e_m``, where
``q >= 2`` is the smallest integer with

    p * (d/q)^(s_n) <= 1/2        (p = current ball count).

Projections in directions near ``e_m`` then collapse each sibling group, so
the ``s_n``-content of the projection stays below one on the emitted arc
``J(e_m, n)`` of width ``d/q`` around ``e_m``.  The diameter sum ``p * d``
is exactly one at every step (tracked in rational arithmetic).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from ..covering import covering_number_1d
from ..geometry import Arc, BallUnion, Direction, direction_from_pair, project_union


def default_directions(count: int) -> list[Direction]:
    """Deterministic enumeration of primitive rational directions.

    Ordered by max(|a|, |b|) of the primitive vector, then by angle; the
    family is dense in the circle as ``count`` grows.

    >>> [e.normal_pair() for e in default_directions(4)]
    [(1, -1), (1, 0), (1, 1), (0, 1)]
    """
    out = []
    L = 1
    while len(out) < count:
        layer = set()
        for a in range(0, L + 1):
            for b in range(-L, L + 1):
                if max(abs(a), abs(b)) != L or math.gcd(a, abs(b)) != 1:
                    continue
                if a < 0 or (a == 0 and b < 0):
                    a, b = -a, -b
                layer.add((a, b))
        for a, b in sorted(layer, key=lambda v: math.atan2(v[1], v[0])):
            out.append(direction_from_pair(a, b))
        L += 1
    return out[:count]


def diagonal_pairs(steps: int) -> list[tuple[int, int]]:
    """First ``steps`` pairs (m, n) in the diagonal order, 1-based.

    >>> diagonal_pairs(6)
    [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1)]
    """
    out = []
    r = 1
    while len(out) < steps:
        for m in range(1, r + 1):
            out.append((m, r - m + 1))
            if len(out) == steps:
                break
        r += 1
    return out


def content_proxy(K: BallUnion, e: Direction, s: float) -> float:
    """Finite-scale s-content of the projection: ``N * (2 delta)^s`` with
    covering balls of radius ``delta`` equal to the ball radius of ``K``.

    An upper proxy for the s-dimensional content of ``rho_e(K)`` at the
    resolution of the current generation.
    """
    N = covering_number_1d(project_union(K, e), K.radius)
    return N * float(2 * K.radius) ** s


@dataclass(frozen=True)
class MainParams:
    """Inputs of the cascade.

    ``s(n)`` must be non-increasing in n with values in (0, 1]; the default
    ``9 / (9 + n)`` keeps the split factors q moderate for small depths.
    """

    directions: tuple
    steps: int
    s: Callable[[int], float] = lambda n: 9.0 / (9 + n)
    proxy_samples: int = 16

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        need = max(m for m, _ in diagonal_pairs(self.steps))
        if len(self.directions) < need:
            raise ValueError(f"need at least {need} directions for {self.steps} steps")


@dataclass(frozen=True)
class Generation:
    """One cascade generation with its per-step certificates."""

    level: int
    balls: BallUnion
    diameter: Fraction
    pair: tuple          # (m, n), or (0, 0) for the root
    q: int
    arc: Arc | None
    certificates: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CascadeResult:
    generations: tuple
    params: MainParams

    @property
    def arcs(self):
        return [(g.pair, g.arc) for g in self.generations if g.arc is not None]

    def to_text(self) -> str:
        """One block per generation: ``#balls <level> <radius>`` then centers."""
        lines = []
        for g in self.generations:
            lines.append(f"#balls {g.level} {float(g.balls.radius)!r}")
            for cx, cy in g.balls.centers:
                lines.append(f"{float(cx)!r} {float(cy)!r}")
        return "\n".join(lines) + "\n"


def _smallest_q(p: int, d: Fraction, s: float) -> int:
    """Smallest q >= 2 with p * (d/q)^s <= 1/2."""
    def ok(q):
        return p * float(d / q) ** s <= 0.5
    q = max(2, math.ceil(float(d) * (2 * p) ** (1 / s)))
    while q > 2 and ok(q - 1):
        q -= 1
    while not ok(q):
        q += 1
    return q


def construct_main(params: MainParams) -> CascadeResult:
    """Run the cascade for ``params.steps`` diagonal steps.

    Certificates recorded per subdivision step:

    * ``diameter_sum_one``: p * d == 1 exactly (Fractions).
    * ``q_minimal``: the split factor satisfies the content condition and
      q - 1 does not (unless q == 2).
    * ``proxy_max``: max of :func:`content_proxy` over ``proxy_samples``
      directions sampled across the emitted arc (must be <= 1).
    """
    pairs = diagonal_pairs(params.steps)
    balls = BallUnion.build([(0.0, 0.0)], Fraction(1, 2))
    d = Fraction(1)
    gens = [Generation(level=0, balls=balls, diameter=d, pair=(0, 0), q=1,
                       arc=None,
                       certificates={"diameter_sum_one": True})]
    for level, (m, n) in enumerate(pairs[1:], start=1):
        e = params.directions[m - 1]
        s = params.s(n)
        if not 0 < s <= 1:
            raise ValueError(f"s({n}) = {s} outside (0, 1]")
        p = len(balls)
        q = _smallest_q(p, d, s)
        u = e.perp()
        R = d / 2
        offsets = [-R + Fraction(2 * i - 1, q) * R for i in range(1, q + 1)]
        centers = [(cx + float(t) * u.x, cy + float(t) * u.y)
                   for cx, cy in balls.centers for t in offsets]
        d_new = d / q
        balls = BallUnion.build(centers, d_new / 2)
        arc = Arc(midpoint=e, length=float(d_new))
        proxy = max(content_proxy(balls, f, s) for f in arc.sample(params.proxy_samples))
        certs = {
            "diameter_sum_one": Fraction(len(balls)) * d_new == 1,
            "q_minimal": (p * float(d_new) ** s <= 0.5
                          and (q == 2 or p * float(d / (q - 1)) ** s > 0.5)),
            "proxy_max": proxy,
            "proxy_ok": proxy <= 1.0,
        }
        gens.append(Generation(level=level, balls=balls, diameter=d_new,
                               pair=(m, n), q=q, arc=arc, certificates=certs))
        d = d_new
    return CascadeResult(generations=tuple(gens), params=params)
