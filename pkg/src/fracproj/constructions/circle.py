"""Nested arc families on the circle with calibrated packing at every level.

State after level ``j``: a finite angle set ``C_j`` (all angles exact
rationals, in radian-like arc-length units on the unit circle) and one
closed arc of length ``r_j`` around each angle.  The step data obey

* (P1)  ``n_j`` is the smallest integer with ``n^(1-t_j) * r_{j-1}^(t_j) >= 10``;
* (P2)  each level-(j-1) arc receives ``n_j`` evenly spaced angles in its
        interior — the arc midpoint among them, the endpoints excluded —
        pairwise more than ``r_{j-1} / (10 n_j)`` apart;
* (P3)  ``r_j`` is the largest power of 1/2 for which the child arcs are
        pairwise disjoint and contained in their parent arc.

The packing certificate per parent arc: the chosen angles form an exact
packing witness, ``P(C_j intersect I, r_{j-1}/(10 n_j)) >= n_j`` (distances
measured in arc length).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._rationals import largest_half_power_below


@dataclass(frozen=True)
class SetEParams:
    """Exponent schedule ``t_j`` in (0, 1) per level and the target depth."""

    t: tuple
    depth: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if len(self.t) < self.depth:
            raise ValueError("need one exponent t_j per level")
        if any(not 0 < float(tj) < 1 for tj in self.t):
            raise ValueError("each t_j must lie in (0, 1)")


def default_setE_params(depth: int = 3) -> SetEParams:
    return SetEParams(t=tuple(0.1 + 0.01 * j for j in range(1, depth + 1)),
                      depth=depth)


@dataclass(frozen=True)
class SetELevel:
    level: int
    n: int
    r: Fraction              # arc length at this level (power of 1/2 for j >= 1)
    angles: tuple            # exact rational angles, sorted
    arcs: tuple              # (midpoint_angle, r) pairs
    certificates: dict


@dataclass(frozen=True)
class SetEResult:
    levels: tuple

    def points(self, level: int | None = None) -> list[tuple]:
        """Unit-circle points of C_j (floats; the certificates never use these)."""
        lev = self.levels[-1 if level is None else level]
        return [(math.cos(float(a)), math.sin(float(a))) for a in lev.angles]

    def to_text(self) -> str:
        lines = []
        for lev in self.levels:
            lines.append(f"#arcs {lev.level} {float(lev.r)!r}")
            for mid, _ in lev.arcs:
                lines.append(f"{float(mid)!r}")
        return "\n".join(lines) + "\n"


def _smallest_n(r: Fraction, t: float) -> int:
    """Smallest n >= 1 with n^(1-t) * r^t >= 10."""
    def ok(n):
        return (1 - t) * math.log(n) + t * math.log(float(r)) >= math.log(10.0)
    n = max(1, math.ceil((10.0 / float(r) ** t) ** (1 / (1 - t))))
    while n > 1 and ok(n - 1):
        n -= 1
    while not ok(n):
        n += 1
    return n


def _greedy_angle_packing(angles: Sequence[Fraction], separation: Fraction) -> int:
    """Leftmost-first packing count with pairwise gaps >= ``separation``
    (exact; the arcs here are far shorter than the full circle, so no
    wrap-around handling is needed)."""
    count = 0
    last = None
    for a in sorted(angles):
        if last is None or a - last >= separation:
            count += 1
            last = a
    return count


def construct_setE(params: SetEParams) -> SetEResult:
    """Build the nested arc families down to ``params.depth``.

    Within a parent arc of length r the ``n`` angles sit at offsets
    ``(i - floor(n/2)) * h`` from the midpoint, ``h = r/(n+1)`` — midpoint
    in, endpoints out, gaps ``h > r/(10n)``.  All angle arithmetic is exact.
    """
    r = Fraction(1)
    angles = (Fraction(0),)
    levels = [SetELevel(level=0, n=1, r=r, angles=angles,
                        arcs=((Fraction(0), r),),
                        certificates={"root": True})]
    for j in range(1, params.depth + 1):
        t = float(params.t[j - 1])
        r_prev = levels[-1].r
        n = _smallest_n(r_prev, t)
        h = r_prev / (n + 1)
        r_new = largest_half_power_below(h)
        new_angles = []
        packing_ok = True
        sep = r_prev / (5 * n)        # 2 * (r_prev / (10 n))
        for mid, _ in levels[-1].arcs:
            group = [mid + (i - n // 2) * h for i in range(n)]
            # (P2): interior placement with the midpoint kept
            assert mid in group
            assert all(abs(a - mid) < r_prev / 2 for a in group)
            if _greedy_angle_packing(group, sep) < n:
                packing_ok = False
            new_angles.extend(group)
        new_angles.sort()
        arcs = tuple((a, r_new) for a in new_angles)
        min_gap = min((b - a for a, b in zip(new_angles, new_angles[1:])),
                      default=None)
        certs = {
            "P1_value": n ** (1 - t) * float(r_prev) ** t,
            "P1_minimal": n == 1 or (n - 1) ** (1 - t) * float(r_prev) ** t < 10,
            "P2_separation_ok": min_gap is None or min_gap > r_prev / (10 * n),
            "P2_packing_ok": packing_ok,
            "P3_disjoint": min_gap is None or r_new < min_gap,
            "P3_r_maximal": 2 * r_new >= h,
            "P3_power_of_half": r_new.numerator == 1
                                and (r_new.denominator & (r_new.denominator - 1)) == 0,
        }
        levels.append(SetELevel(level=j, n=n, r=r_new,
                                angles=tuple(new_angles), arcs=arcs,
                                certificates=certs))
    return SetEResult(levels=tuple(levels))
