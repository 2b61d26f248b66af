"""Delta-tube machinery: (delta,1)-sets, tube energies, exponent iteration.

A direction ``e`` and width ``delta`` partition the plane into the half-open
tubes ``T_e = { rho_e^{-1}[j*delta, (j+1)*delta) : j in Z }``; two points are
related, ``x ~_e y``, when they share a tube.  The counting energy over a
direction family E is  sum_e card{(x, y) in C x C : x ~_e y}  (ordered pairs,
diagonal included), lower-bounded per direction by Cauchy-Schwarz as
(sum_j m_j)^2 / K_e with K_e the number of occupied tubes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .covering import covering_number_1d_points
from .geometry import Direction, PointSet, direction_from_angle, project


def tube_index(x, e: Direction, delta) -> int:
    """floor(rho_e(x)/delta) with the half-open convention [j*d, (j+1)*d).

    Exact when the coordinates and delta are rational and e is tagged — the
    surrogate is used so boundary points land deterministically.
    """
    if e.rational and not isinstance(delta, float) \
            and not any(isinstance(c, float) for c in x):
        from .geometry import exact_project, surrogate_scale_sq
        # surrogate = rho * sqrt(p^2+q^2); compare against delta on the true
        # axis by squaring — instead, divide exactly: floor(rho/delta) equals
        # floor(surrogate / (delta * sqrt(p^2+q^2))), and the square root is
        # irrational, so we bracket with integer arithmetic.
        t = exact_project(x, e)
        s2 = surrogate_scale_sq(e)
        d = Fraction(delta)
        # find j with j*d*sqrt(s2) <= t < (j+1)*d*sqrt(s2)
        # i.e. largest j with (j*d)^2*s2 <= t^2 respecting signs
        approx = float(t) / (float(d) * math.sqrt(s2))
        j = math.floor(approx)
        for cand in (j - 1, j, j + 1):
            lo, hi = cand * d, (cand + 1) * d
            if _cmp_mul_sqrt(lo, s2, t) <= 0 and _cmp_mul_sqrt(hi, s2, t) > 0:
                return cand
        raise ArithmeticError("tube index bracketing failed")
    return math.floor(project(x, e) / float(delta))


def _cmp_mul_sqrt(a: Fraction, s2: int, t: Fraction) -> int:
    """Sign of a*sqrt(s2) - t, exactly."""
    if a >= 0 and t < 0:
        return 1
    if a < 0 and t >= 0:
        return -1
    lhs, rhs = a * a * s2, t * t
    if a >= 0:  # both sides nonnegative
        return (lhs > rhs) - (lhs < rhs)
    return (rhs > lhs) - (rhs < lhs)


# ---------------------------------------------------------------------------
# (delta, 1)-sets
# ---------------------------------------------------------------------------

def is_delta_one_set(C: PointSet, delta: float, A: float | None = None) -> dict:
    """Validate the (delta,1)-set condition and report the minimal constant.

    Checks (a) pairwise distances >= delta and (b) for every center x and
    dyadic radius r = delta*2^k up to the diameter,
    card(C intersect B(x, r)) <= A * r/delta.  Checking at centers and dyadic
    radii certifies the general condition with constant 2*A*.
    """
    import numpy as np
    pts = np.array([(float(p[0]), float(p[1])) for p in C.points])
    n = len(pts)
    if n == 0:
        return {"passes": A is None or A >= 0, "a_star": 0.0, "separated": True}
    diff = pts[:, None, :] - pts[None, :, :]
    d2 = (diff * diff).sum(axis=2)
    dd = float(delta) * float(delta)
    off = d2[~np.eye(n, dtype=bool)]
    sep = bool(off.min() >= dd * (1 - 1e-12)) if n > 1 else True
    diam = math.sqrt(float(d2.max()))
    a_star = 1.0
    worst = None
    k = 0
    r = float(delta)
    while True:
        cards = (d2 <= r * r * (1 + 1e-12)).sum(axis=1)
        i = int(cards.argmax())
        need = float(cards[i]) / (r / float(delta))
        if need > a_star:
            a_star = need
            worst = (i, r, int(cards[i]))
        if r > 2 * diam or r > 4:
            break
        k += 1
        r = float(delta) * (2 ** k)
    passes = sep and (A is None or a_star <= A)
    return {"passes": passes, "a_star": a_star, "separated": sep,
            "worst": worst, "general_constant": 2 * a_star}


def extract_delta_one_subset(P: PointSet, delta: float, xi: Direction) -> PointSet:
    """Greedy tube-based extraction of a (delta,1)-subset.

    Keeps nonempty tubes of T_xi with pairwise index gap >= 2 (so the kept
    tubes are delta-separated) and one point per kept tube.  Any r-ball meets
    at most r/delta + 2 kept tubes, so the output passes the validator with
    A = 3.
    """
    by_tube: dict[int, tuple] = {}
    for pt in P.points:
        j = math.floor(project(pt, xi) / float(delta))
        if j not in by_tube:
            by_tube[j] = pt
    kept = []
    last = None
    for j in sorted(by_tube):
        if last is None or j - last >= 2:
            kept.append(by_tube[j])
            last = j
    return PointSet(tuple(kept))


# ---------------------------------------------------------------------------
# Energies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnergyReport:
    """Per-direction tube histograms with energy and Cauchy-Schwarz certificates."""

    rows: tuple  # (direction_index, e, occupied_tubes, energy, cs_lower)
    total: float

    def to_csv(self) -> str:
        lines = ["direction_index,ex,ey,occupied_tubes,energy,cs_lower"]
        for i, e, k, en, cs in self.rows:
            lines.append(f"{i},{e.x!r},{e.y!r},{k},{en!r},{cs!r}")
        return "\n".join(lines) + "\n"


def counting_energy(C: PointSet, E, delta) -> EnergyReport:
    """E = sum_e sum_j m_j^2 over the tube histograms (ordered pairs with
    diagonal), with the per-direction lower certificate (sum m_j)^2 / K_e."""
    rows = []
    total = 0
    n = len(C)
    for i, e in enumerate(E):
        hist: dict[int, int] = {}
        for pt in C.points:
            j = math.floor(project(pt, e) / float(delta))
            hist[j] = hist.get(j, 0) + 1
        k = len(hist)
        energy = sum(m * m for m in hist.values())
        cs = Fraction(n * n, k) if k else Fraction(0)
        rows.append((i, e, k, energy, cs))
        total += energy
    return EnergyReport(rows=tuple(rows), total=total)


def weighted_energy(mu_points, weights, E, width, kernel_exponent=0.0) -> EnergyReport:
    """sum_e sum_{x ~_e y} w_x w_y |x - y|^kernel over tube partitions of the
    given width (pass delta**rho directly for the narrowed first-estimate
    tubes).  The diagonal contributes only when kernel_exponent == 0.
    """
    ws = [float(w) for w in weights]
    if any(w < 0 for w in ws):
        raise ValueError("weights must be nonnegative")
    if abs(sum(ws) - 1.0) > 1e-12:
        raise ValueError("weights must sum to 1 within 1e-12")
    pts = [(float(p[0]), float(p[1])) for p in mu_points]
    n = len(pts)
    rows = []
    total = 0.0
    for idx, e in enumerate(E):
        buckets: dict[int, list[int]] = {}
        for i, pt in enumerate(pts):
            j = math.floor(project(pt, e) / float(width))
            buckets.setdefault(j, []).append(i)
        energy = 0.0
        for members in buckets.values():
            for a in members:
                for b in members:
                    if a == b:
                        if kernel_exponent == 0.0:
                            energy += ws[a] * ws[b]
                        continue
                    dist = math.hypot(pts[a][0] - pts[b][0], pts[a][1] - pts[b][1])
                    energy += ws[a] * ws[b] * dist ** kernel_exponent
        mass_sq = [sum(ws[i] for i in members) ** 2 for members in buckets.values()]
        k = len(buckets)
        cs = (sum(math.sqrt(m) for m in mass_sq)) ** 2 / k if k else 0.0
        rows.append((idx, e, k, energy, cs))
        total += energy
    return EnergyReport(rows=tuple(rows), total=total)


def riesz_energy(mu_points, weights, gamma: float) -> float:
    """Discrete I_gamma: sum over x != y of w_x w_y |x - y|^(-gamma)."""
    pts = [(float(p[0]), float(p[1])) for p in mu_points]
    ws = [float(w) for w in weights]
    total = 0.0
    for i in range(len(pts)):
        for j in range(len(pts)):
            if i == j:
                continue
            dist = math.hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1])
            if dist == 0:
                raise ValueError("coincident atoms give infinite Riesz energy")
            total += ws[i] * ws[j] * dist ** (-gamma)
    return total


# ---------------------------------------------------------------------------
# Exceptional-direction scan
# ---------------------------------------------------------------------------

def direction_net(delta: float) -> list[Direction]:
    """ceil(pi/delta) equally spaced directions, antipodally identified."""
    k = math.ceil(math.pi / float(delta))
    return [direction_from_angle(i * math.pi / k) for i in range(k)]


def marstrand_exceptional_scan(C: PointSet, delta: float, tau: float,
                               validate: bool = True) -> dict:
    """Directions in a delta-net where N(C_e, delta) <= delta^tau * n.

    ``C`` must pass the (delta,1)-validator first (A = 3, the extraction
    guarantee).  Reports the exceptional directions, their count, and the
    ratio against delta^(tau-1) * log(1/delta).
    """
    n = len(C)
    if validate:
        rep = is_delta_one_set(C, delta)
        if not rep["separated"] or rep["a_star"] > 3 + 1e-9:
            raise ValueError(
                f"input is not a (delta,1)-set with A=3: worst {rep['worst']}")
    threshold = (float(delta) ** tau) * n
    exceptional = []
    for e in direction_net(delta):
        vals = [project(pt, e) for pt in C.points]
        if covering_number_1d_points(vals, float(delta)) <= threshold:
            exceptional.append(e)
    denom = float(delta) ** (tau - 1) * math.log(1 / float(delta))
    return {"directions": exceptional, "count": len(exceptional),
            "bound_denominator": denom,
            "ratio": len(exceptional) / denom if denom > 0 else float("inf")}


# ---------------------------------------------------------------------------
# Balanced rectangle split
# ---------------------------------------------------------------------------

def balanced_split(positions, masses, delta: float, split_width: float,
                   c: float, sigma: float) -> dict:
    """Slide a width-``split_width`` window in steps of delta along a tube
    profile until either branch-1 (mass outside <= c * delta^sigma) or
    branch-2 (the two outside halves have mass ratio in [1/2, 2]) holds.

    Raises with the best ratio found if neither branch is achievable — a
    discreteness artifact flagged as such.
    """
    pos = [float(p) for p in positions]
    ms = [float(m) for m in masses]
    if len(pos) != len(ms):
        raise ValueError("positions and masses must align")
    lo = min(pos) - split_width
    hi = max(pos)
    budget = c * float(delta) ** sigma
    best = None
    x = lo
    while x <= hi + 1e-12:
        left = sum(m for p, m in zip(pos, ms) if p < x)
        right = sum(m for p, m in zip(pos, ms) if p >= x + split_width)
        outside = left + right
        if outside <= budget:
            return {"position": x, "branch": 1, "outside_mass": outside}
        if left > 0 and right > 0:
            ratio = left / right
            if 0.5 <= ratio <= 2.0:
                return {"position": x, "branch": 2, "ratio": ratio}
            score = abs(math.log(ratio))
            if best is None or score < best[1]:
                best = (x, score, ratio)
        x += float(delta)
    raise ArithmeticError(
        f"no admissible window at step delta (discreteness artifact); "
        f"best ratio {best[2] if best else 'n/a'} at {best[0] if best else 'n/a'}")


# ---------------------------------------------------------------------------
# Exponent iteration
# ---------------------------------------------------------------------------

def exponent_iteration(sigma: float, gamma: float, rho: float, tau0: float,
                       n: int) -> dict:
    """Iterate tau <- rho*sigma - gamma*(rho - 1) + (1 - gamma)*tau.

    The affine map contracts with factor (1 - gamma); its fixed point and the
    reported limit is rho*sigma/gamma - (rho - 1).  For the distinguished
    rho = gamma/(gamma + sigma*(gamma - 1)) the limit collapses to
    sigma*gamma/(gamma + sigma*(gamma - 1)).
    """
    if not (0 < gamma < 1):
        raise ValueError(f"gamma={gamma} outside (0, 1)")
    if rho < 1:
        raise ValueError(f"rho={rho} must be >= 1")
    seq = []
    tau = tau0
    for _ in range(n):
        tau = rho * sigma - gamma * (rho - 1) + (1 - gamma) * tau
        seq.append(tau)
    limit = rho * sigma / gamma - (rho - 1)
    return {"sequence": seq, "limit": limit}


def distinguished_rho(sigma: float, gamma: float) -> float:
    """rho = gamma / (gamma + sigma*(gamma - 1))."""
    return gamma / (gamma + sigma * (gamma - 1))
