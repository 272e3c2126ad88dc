"""Rayleigh quotients of the cut-off trial family and parameter search.

The trial function separates as exp(-alpha*|x1|/2) * h(x2) with
h = g_rho * chi(./n), so every quantity reduces to a 1D integral in x2.
Derivatives of h are taken analytically piecewise; numerical
differentiation would dominate the error budget of the energy functional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .quadrature import DEFAULT_ABS_TOL, DEFAULT_REL_TOL, integrate
from .trial import (
    DomainError,
    TrialParams,
    WedgeConfig,
    bound_constants,
    g_rho,
    g_rho_slope,
    profile_F,
    profile_F_slope,
)

__all__ = [
    "RayleighReport",
    "norm_sq",
    "r_functional",
    "rayleigh",
    "verify_thm1",
    "optimize_bound",
    "golden_section",
]

#: Beyond this multiple of the natural length scale the quotient is within
#: 1e-6 * alpha^2 of its large-n limit and optimization stalls by design.
N_MAX_SCALE = 1e4


@dataclass(frozen=True)
class RayleighReport:
    """Energy functional, squared norm and the resulting Rayleigh quotient."""

    r_value: float
    norm_sq: float
    quotient: float
    margin: float
    params: TrialParams


def _h_and_slope(cfg: WedgeConfig, params: TrialParams):
    rho, n, cutoff = params.rho, params.n, params.cutoff

    def h(x: float) -> float:
        return g_rho(x, cfg, rho) * cutoff.value(x / n)

    def h_slope(x: float) -> float:
        chi = cutoff.value(x / n)
        chi_d = cutoff.slope(x / n)
        return g_rho_slope(x, cfg, rho) * chi + g_rho(x, cfg, rho) * chi_d / n

    return h, h_slope


def _cut_breakpoints(cfg: WedgeConfig, n: float) -> tuple[float, ...]:
    """Kinks of the integrands plus geometric multiples of the decay length.

    For cutoff scales n far beyond the natural length 1/(alpha*tan(theta))
    the derivative terms concentrate in a vanishing fraction of the (0, n)
    panel; without interior breakpoints the adaptive rule can sample right
    past the core and silently report (nearly) zero.
    """
    scale = 1.0 / (cfg.alpha * cfg.tan_theta)
    pts = {-n, 0.0, n}
    k = scale
    while k < 64.0 * scale:
        pts.update((-k, k))
        k *= 2.0
    return tuple(sorted(p for p in pts if -2.0 * n < p < 2.0 * n))


def norm_sq(
    cfg: WedgeConfig,
    params: TrialParams,
    abs_tol: float = DEFAULT_ABS_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
) -> float:
    """Squared L2 norm of the trial function over the wedge domain."""
    params.check(cfg)
    h, _ = _h_and_slope(cfg, params)
    tan_t = cfg.tan_theta

    def integrand(x: float) -> float:
        return h(x) ** 2 * profile_F(x * tan_t, cfg.alpha)

    est = integrate(
        integrand,
        -2.0 * params.n,
        2.0 * params.n,
        abs_tol=abs_tol,
        rel_tol=rel_tol,
        breakpoints=_cut_breakpoints(cfg, params.n),
    )
    return est.require()


def r_functional(
    cfg: WedgeConfig,
    params: TrialParams,
    abs_tol: float = DEFAULT_ABS_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
) -> float:
    """Energy functional of the cut-off profile, by quadrature.

    Converges to closed_R(cfg, rho) as n grows, with O(1/n) error from the
    cutoff wings; the raw value is reported without sign judgment.
    """
    params.check(cfg)
    h, h_slope = _h_and_slope(cfg, params)
    tan_t = cfg.tan_theta
    cot_t = 1.0 / tan_t

    def integrand(x: float) -> float:
        t = x * tan_t
        hp = h_slope(x)
        return hp * (
            hp * profile_F(t, cfg.alpha)
            - h(x) * profile_F_slope(t, cfg.alpha) * cot_t
        )

    est = integrate(
        integrand,
        -2.0 * params.n,
        2.0 * params.n,
        abs_tol=abs_tol,
        rel_tol=rel_tol,
        breakpoints=_cut_breakpoints(cfg, params.n),
    )
    return est.require()


def rayleigh(cfg: WedgeConfig, params: TrialParams) -> RayleighReport:
    """Rayleigh quotient report; quotient = -alpha^2/4 + R/norm^2 by identity."""
    r = r_functional(cfg, params)
    ns = norm_sq(cfg, params)
    ratio = r / ns
    return RayleighReport(
        r_value=r,
        norm_sq=ns,
        quotient=-cfg.alpha**2 / 4.0 + ratio,
        margin=-ratio,
        params=params,
    )


def verify_thm1(
    cfg: WedgeConfig, rho: float, max_doublings: int = 60
) -> tuple[float, RayleighReport]:
    """Search a doubling sequence of cutoff scales until the energy is negative.

    Starts at the natural transition length 1/(alpha*tan(theta)); guaranteed
    to succeed for admissible rho, so exhaustion indicates a bug.
    """
    if not 0.0 < rho < cfg.cot_sq_theta:
        raise DomainError(
            f"rho must lie in (0, cot^2 theta) = (0, {cfg.cot_sq_theta}), got {rho}"
        )
    n = 1.0 / (cfg.alpha * cfg.tan_theta)
    for _ in range(max_doublings + 1):
        params = TrialParams(rho=rho, n=n)
        if r_functional(cfg, params) < 0.0:
            return n, rayleigh(cfg, params)
        n *= 2.0
    raise RuntimeError(
        f"no negative energy found up to n={n}; this should be impossible"
    )


def golden_section(
    f: Callable[[float], float],
    a: float,
    b: float,
    rel_tol: float = 1e-6,
    max_iter: int = 200,
) -> tuple[float, float]:
    """Minimize a unimodal function on [a, b]; returns (x_min, f(x_min))."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= rel_tol * (abs(a) + abs(b)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def optimize_bound(
    cfg: WedgeConfig,
    max_sweeps: int = 30,
    rel_tol: float = 1e-6,
) -> tuple[TrialParams, RayleighReport]:
    """Improve the Rayleigh quotient over (rho, n) by coordinate descent.

    Deterministic golden-section line searches, initialized at the
    closed-form default (rho = cos^2 theta, n = 2b/a); the result is never
    worse than the starting point.
    """
    report = bound_constants(cfg)
    cot_sq = cfg.cot_sq_theta
    rho = math.cos(cfg.theta) ** 2
    n = report.n_opt
    n_lo = max(report.n_opt / 100.0, 1.0 / (cfg.alpha * cfg.tan_theta) / 100.0)
    n_hi = N_MAX_SCALE / (cfg.alpha * cfg.tan_theta)
    rho_lo = 1e-6 * cot_sq
    rho_hi = (1.0 - 1e-6) * cot_sq

    def quotient(r: float, m: float) -> float:
        return rayleigh(cfg, TrialParams(rho=r, n=m)).quotient

    best_q = quotient(rho, n)
    best = (rho, n)
    for _ in range(max_sweeps):
        prev_q = best_q
        rho, q = golden_section(lambda r: quotient(r, best[1]), rho_lo, rho_hi, rel_tol)
        if q < best_q:
            best_q, best = q, (rho, best[1])
        # search over log(n): the optimum scale spans orders of magnitude
        s, q = golden_section(
            lambda t: quotient(best[0], math.exp(t)),
            math.log(n_lo),
            math.log(n_hi),
            rel_tol,
        )
        if q < best_q:
            best_q, best = q, (best[0], math.exp(s))
        gain = prev_q - best_q
        if gain <= rel_tol * abs(best_q):
            break

    best_params = TrialParams(rho=best[0], n=best[1])
    return best_params, rayleigh(cfg, best_params)
