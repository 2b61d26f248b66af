"""Closed-form calculators for the exceptional-set bound formulas.

Every function validates its stated parameter domain and raises
:class:`DomainError` outside it — the formulas are meaningless there, so no
clamping is performed.  All formulas evaluate exactly when called with
:class:`fractions.Fraction` arguments.
"""

from __future__ import annotations

from fractions import Fraction


class DomainError(ValueError):
    """Parameter outside the stated validity range of a bound formula."""

    def __init__(self, formula: str, message: str):
        self.formula = formula
        super().__init__(f"{formula}: {message}")


def _check(cond: bool, formula: str, message: str):
    if not cond:
        raise DomainError(formula, message)


def kaufman_bound(sigma):
    """dim{e : dim K_e <= sigma} <= sigma, on 0 <= sigma <= 1."""
    _check(0 <= sigma <= 1, "kaufman", f"sigma={sigma} outside [0, 1]")
    return sigma


def falconer_howroyd_threshold(gamma, sigma):
    """gamma / (1 + (1/sigma - 1/2) * gamma); 0 < sigma <= 1, gamma in [0, 2].

    At sigma = 1 this equals 2*gamma/(2 + gamma), exactly for Fraction input.
    """
    _check(0 < sigma <= 1, "falconer_howroyd", f"sigma={sigma} outside (0, 1]")
    _check(0 <= gamma <= 2, "falconer_howroyd", f"gamma={gamma} outside [0, 2]")
    one = Fraction(1) if isinstance(sigma, (int, Fraction)) else 1.0
    return gamma / (1 + (one / sigma - one / 2) * gamma)


def fh_lower(gamma):
    """Almost-sure lower bound 2*gamma/(2 + gamma) for dim_p of projections."""
    _check(0 <= gamma <= 2, "fh_lower", f"gamma={gamma} outside [0, 2]")
    return 2 * gamma / (2 + gamma)


def estimate_bound1(gamma, sigma):
    """sigma*gamma / (gamma + sigma*(gamma - 1)); 0 <= sigma <= gamma <= 1.

    Limits: -> 1 as sigma -> gamma; -> gamma/(1+gamma) as sigma -> gamma/2.
    """
    _check(0 <= sigma <= gamma <= 1, "estimate_bound1",
           f"need 0 <= sigma <= gamma <= 1, got sigma={sigma}, gamma={gamma}")
    den = gamma + sigma * (gamma - 1)
    if den == 0:
        raise DomainError("estimate_bound1", "degenerate denominator (gamma = sigma = 0)")
    return sigma * gamma / den


def estimate_bound2(gamma, sigma):
    """(2*sigma - gamma)*(1 - gamma)/(gamma/2) + sigma; gamma/2 <= sigma <= gamma.

    Limits: -> gamma/2 as sigma -> gamma/2; -> 2 - gamma as sigma -> gamma.
    """
    _check(0 < gamma <= 1, "estimate_bound2", f"gamma={gamma} outside (0, 1]")
    _check(gamma / 2 <= sigma <= gamma, "estimate_bound2",
           f"need gamma/2 <= sigma <= gamma, got sigma={sigma}, gamma={gamma}")
    return (2 * sigma - gamma) * (1 - gamma) / (gamma / 2) + sigma


def estimate_bounds_min(gamma, sigma):
    """Minimum of the applicable Theorem-type bounds at (gamma, sigma)."""
    vals = []
    try:
        vals.append(estimate_bound1(gamma, sigma))
    except DomainError:
        pass
    try:
        vals.append(estimate_bound2(gamma, sigma))
    except DomainError:
        pass
    if not vals:
        raise DomainError("estimate_bounds_min",
                          f"no bound applies at gamma={gamma}, sigma={sigma}")
    return min(vals)


def estimate_bound1_reformulated(gamma, tau):
    """tau*gamma / (tau*gamma + (1 - tau)); tau in [0, 1], gamma in [0, 1]."""
    _check(0 <= tau <= 1, "estimate_bound1_reformulated", f"tau={tau} outside [0, 1]")
    _check(0 <= gamma <= 1, "estimate_bound1_reformulated", f"gamma={gamma} outside [0, 1]")
    den = tau * gamma + (1 - tau)
    if den == 0:
        raise DomainError("estimate_bound1_reformulated", "degenerate denominator")
    return tau * gamma / den


def mainP_threshold(s):
    """Threshold s/2 with cardinality cap 2: at most two directions can have
    dim_p of the projection below s/2 when dim_p K = s."""
    _check(0 <= s <= 2, "mainP_threshold", f"s={s} outside [0, 2]")
    return {"threshold": s / 2, "cardinality_cap": 2}


def pss_bound(gamma):
    """dim{e : the gamma-packing premeasure of K_e vanishes} <= gamma."""
    _check(0 <= gamma <= 1, "pss", f"gamma={gamma} outside [0, 1]")
    return gamma


def rams_bound(sigma):
    """dim_p{e : dim K_e <= sigma} <= sigma (self-similar, no rotations)."""
    _check(0 <= sigma <= 1, "rams", f"sigma={sigma} outside [0, 1]")
    return sigma


def furstenberg_bound(sigma, dim_k=None):
    """Identity bound sigma, valid for 0 <= sigma < dim K; warns via flag."""
    _check(0 <= sigma <= 1, "furstenberg", f"sigma={sigma} outside [0, 1]")
    warning = None
    if dim_k is not None and sigma >= dim_k:
        warning = f"sigma={sigma} >= dim K={dim_k}: bound stated only below dim K"
    return {"value": sigma, "warning": warning}


def bigex_parameters(sigma):
    """d = ceil(3/(1 - sigma)) and the admissible tau-interval ((d+1)/(d+2), 1).

    Valid for sigma in (3/4, 1); the default tau is the interval midpoint.
    """
    _check(Fraction(3, 4) < sigma < 1, "bigex_parameters",
           f"sigma={sigma} outside (3/4, 1)")
    inv = 3 / (1 - sigma)
    d = int(inv) if inv == int(inv) else int(inv) + 1
    d = max(d, 3)
    lo = Fraction(d + 1, d + 2)
    tau = lo + (1 - lo) / 2
    return {"d": d, "tau_interval": (lo, 1), "tau": tau}


def category_bound(sigma, m):
    """1 + sigma - m, for 0 <= sigma <= m (<= 1)."""
    _check(0 <= sigma <= m, "category_bound",
           f"need 0 <= sigma <= m, got sigma={sigma}, m={m}")
    return 1 + sigma - m


def bourgain_kappa(alpha, eta):
    """Stub: the exponent kappa(alpha, eta) is unspecified in the source;
    only kappa -> 0 as eta decreases to alpha/2 is known."""
    raise DomainError("bourgain_kappa", "unspecified in source")


FORMULAS = {
    "kaufman": kaufman_bound,
    "falc": falconer_howroyd_threshold,
    "fh_lower": fh_lower,
    "estimate1": estimate_bound1,
    "estimate2": estimate_bound2,
    "estimate1_reformulated": estimate_bound1_reformulated,
    "mainP": mainP_threshold,
    "pss": pss_bound,
    "rams": rams_bound,
    "furstenberg": furstenberg_bound,
    "bigex": bigex_parameters,
    "category": category_bound,
}
