"""Stern-Brocot selection of simple rationals inside intervals."""

from __future__ import annotations

import math
from fractions import Fraction


def simplest_fraction_between(lo, hi) -> Fraction:
    """The fraction with smallest denominator in the open interval (lo, hi)
    (smallest numerator breaking ties), by Stern-Brocot descent.

    >>> simplest_fraction_between(Fraction(5, 14), Fraction(5, 13))
    Fraction(3, 8)
    >>> simplest_fraction_between(Fraction(-1, 3), Fraction(1, 7))
    Fraction(0, 1)
    >>> simplest_fraction_between(Fraction(3, 2), Fraction(5, 2))
    Fraction(2, 1)
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if lo >= hi:
        raise ValueError(f"empty interval ({lo}, {hi})")
    if lo < 0 < hi:
        return Fraction(0)
    if hi <= 0:
        return -simplest_fraction_between(-hi, -lo)
    fl = math.floor(lo)
    if fl + 1 < hi:
        return Fraction(fl + 1)
    a, b = lo - fl, hi - fl          # both in [0, 1], interval non-integer
    if a == 0:
        n = math.floor(1 / b) + 1    # smallest n with 1/n < b
        return fl + Fraction(1, n)
    return fl + 1 / simplest_fraction_between(1 / b, 1 / a)


def largest_half_power_below(x: Fraction) -> Fraction:
    """The largest power of 1/2 strictly below ``x`` (x > 0).

    >>> largest_half_power_below(Fraction(1, 14))
    Fraction(1, 16)
    >>> largest_half_power_below(Fraction(1, 4))
    Fraction(1, 8)
    """
    x = Fraction(x)
    if x <= 0:
        raise ValueError("need a positive bound")
    k = max(0, math.floor(-math.log2(float(x))))
    r = Fraction(1, 2 ** k)
    while r >= x:
        r /= 2
    while r * 2 < x:
        r *= 2
    return r
