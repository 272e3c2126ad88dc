"""Closed-form trial-function family and eigenvalue bound constants.

The geometry is a wedge: two rays from the origin at half-angle ``theta``
carrying an attractive delta-interaction of strength ``alpha``.  Everything
in this module is an explicit formula; numerical integration lives in
:mod:`wedgebound.quadrature` and is used only as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

__all__ = [
    "DomainError",
    "WedgeConfig",
    "Cutoff",
    "TENT_CUTOFF",
    "TrialParams",
    "BoundReport",
    "profile_F",
    "profile_F_slope",
    "g_rho",
    "g_rho_slope",
    "cutoff_chi",
    "trial_u",
    "closed_R",
    "closed_J",
    "lambda_upper",
    "bound_constants",
]


class DomainError(ValueError):
    """Input outside the admissible parameter range."""


@dataclass(frozen=True)
class WedgeConfig:
    """Problem instance: wedge half-angle (radians) and coupling constant.

    theta = pi/2 (straight line) is accepted here but rejected by the
    operations for which it is degenerate.
    """

    theta: float
    alpha: float

    def __post_init__(self) -> None:
        if not 0.0 < self.theta <= math.pi / 2:
            raise DomainError(f"theta must lie in (0, pi/2], got {self.theta}")
        if not self.alpha > 0.0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")

    @property
    def tan_theta(self) -> float:
        return math.tan(self.theta)

    @property
    def cot_sq_theta(self) -> float:
        c = math.cos(self.theta)
        s = math.sin(self.theta)
        return (c / s) ** 2


def _tent_value(t: float) -> float:
    at = abs(t)
    if at <= 1.0:
        return 1.0
    if at < 2.0:
        return 2.0 - at
    return 0.0


def _tent_slope(t: float) -> float:
    at = abs(t)
    if 1.0 < at < 2.0:
        return -math.copysign(1.0, t)
    return 0.0


@dataclass(frozen=True)
class Cutoff:
    """Lipschitz plateau profile: 1 on [-1, 1], 0 outside (-2, 2)."""

    value: Callable[[float], float]
    slope: Callable[[float], float]
    lipschitz: float


#: Piecewise-linear plateau with unit Lipschitz constant (the default profile).
TENT_CUTOFF = Cutoff(value=_tent_value, slope=_tent_slope, lipschitz=1.0)


@dataclass(frozen=True)
class TrialParams:
    """Variational family parameters: exponent, cutoff scale and profile."""

    rho: float
    n: float
    cutoff: Cutoff = field(default=TENT_CUTOFF)

    def __post_init__(self) -> None:
        if not self.rho > 0.0:
            raise DomainError(f"rho must be positive, got {self.rho}")
        if not self.n > 0.0:
            raise DomainError(f"n must be positive, got {self.n}")

    def check(self, cfg: WedgeConfig) -> None:
        """Enforce the config-dependent constraint rho < cot^2(theta)."""
        bound = cfg.cot_sq_theta
        if not self.rho < bound:
            raise DomainError(
                f"rho must lie in (0, cot^2 theta) = (0, {bound}), got {self.rho}"
            )


@dataclass(frozen=True)
class BoundReport:
    """All intermediates of the closed-form eigenvalue bound."""

    a: float
    b: float
    c: float
    big_b: float
    n_opt: float
    capital_lambda: float
    lambda_upper_bound: float


def _two_pow_minus_one(e: float) -> float:
    # expm1 keeps full precision for small exponents, where 2**e - 1 would
    # cancel; the same helper is used by every formula so the two bound
    # computation paths stay bitwise-correlated.
    return math.expm1(e * math.log(2.0))


def profile_F(t: float, alpha: float) -> float:
    """Cumulative integral of exp(-alpha*|x|) up to ``t``.

    F(0) = 1/alpha exactly; monotone non-decreasing with range (0, 2/alpha).
    """
    if not alpha > 0.0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if t > 0.0:
        return 2.0 / alpha - math.exp(-alpha * t) / alpha
    if t < 0.0:
        return math.exp(alpha * t) / alpha
    return 1.0 / alpha


def profile_F_slope(t: float, alpha: float) -> float:
    """Derivative exp(-alpha*|t|) of :func:`profile_F`."""
    if not alpha > 0.0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return math.exp(-alpha * abs(t))


def g_rho(x2: float, cfg: WedgeConfig, rho: float) -> float:
    """Power profile F(x2*tan(theta))**rho along the free coordinate."""
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho}")
    return profile_F(x2 * cfg.tan_theta, cfg.alpha) ** rho


def g_rho_slope(x2: float, cfg: WedgeConfig, rho: float) -> float:
    """Analytic derivative of :func:`g_rho` with respect to x2."""
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho}")
    t = x2 * cfg.tan_theta
    f = profile_F(t, cfg.alpha)
    if f == 0.0:  # deep-tail underflow of F; the true slope is below 1e-300
        return 0.0
    # combine F**(rho-1) and F' = exp(-alpha*|t|) in log space: for rho < 1
    # either factor alone can over/underflow while the product stays tame
    lg = (rho - 1.0) * math.log(f) - cfg.alpha * abs(t)
    if lg < -745.0:
        return 0.0
    return rho * math.exp(lg) * cfg.tan_theta


def cutoff_chi(t: float) -> float:
    """Default piecewise-linear plateau profile (Lipschitz constant 1)."""
    return _tent_value(t)


def trial_u(x1: float, x2: float, cfg: WedgeConfig, params: TrialParams) -> float:
    """Trial function exp(-alpha*|x1|/2) * g_rho(x2) * chi(x2/n).

    The formula is evaluated for any (x1, x2); restriction to the wedge
    domain happens in the integrals, not here.
    """
    params.check(cfg)
    return (
        math.exp(-cfg.alpha * abs(x1) / 2.0)
        * g_rho(x2, cfg, params.rho)
        * params.cutoff.value(x2 / params.n)
    )


def closed_R(cfg: WedgeConfig, rho: float) -> float:
    """Closed-form energy functional of the uncut profile.

    Strictly negative for rho in (0, cot^2 theta); zero at the right
    endpoint by continuity.
    """
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho}")
    cot_sq = cfg.cot_sq_theta
    if rho > cot_sq:
        raise DomainError(f"rho must not exceed cot^2 theta = {cot_sq}, got {rho}")
    return (
        cfg.alpha ** (-2.0 * rho)
        * cfg.tan_theta
        * (rho - cot_sq)
        * _two_pow_minus_one(2.0 * rho)
        / (2.0 * rho + 1.0)
    )


def closed_J(cfg: WedgeConfig, rho: float) -> float:
    """Closed form of the weighted profile integral checked by quad_J."""
    if not 0.0 < rho < cfg.cot_sq_theta:
        raise DomainError(
            f"rho must lie in (0, cot^2 theta) = (0, {cfg.cot_sq_theta}), got {rho}"
        )
    return _two_pow_minus_one(2.0 * rho) / (
        rho * (2.0 * rho + 1.0) * cfg.tan_theta * cfg.alpha ** (2.0 * rho)
    )


def _big_b(cos_sq: float) -> float:
    return 108.0 + 180.0 * cos_sq - 132.0 * cos_sq**2 + 45.0 * cos_sq**3 - 5.0 * cos_sq**4


def lambda_upper(theta: float) -> float:
    """Dimensionless gap of the closed-form eigenvalue bound.

    Strictly positive on (0, pi/2), zero at theta = pi/2; the resulting
    bound is lambda <= -alpha^2 * (1/4 + lambda_upper(theta)).
    """
    if not 0.0 < theta <= math.pi / 2:
        raise DomainError(f"theta must lie in (0, pi/2], got {theta}")
    if theta == math.pi / 2:  # cos(pi/2) is not exactly zero in floats
        return 0.0
    c = math.cos(theta) ** 2
    w = _two_pow_minus_one(2.0 * c)
    return 3.0 * c**3 * w**2 / (2.0 * (1.0 + 2.0 * c) ** 3 * _big_b(c))


def bound_constants(cfg: WedgeConfig) -> BoundReport:
    """Assemble every intermediate of the closed-form bound at rho = cos^2 theta."""
    if cfg.theta >= math.pi / 2:
        raise DomainError(
            "theta = pi/2 is degenerate for the bound (a = 0, n_opt undefined)"
        )
    cos_sq = math.cos(cfg.theta) ** 2
    sin_sq = math.sin(cfg.theta) ** 2
    a = -closed_R(cfg, cos_sq)
    big_b = _big_b(cos_sq)
    alpha_pow = cfg.alpha ** (-(2.0 * cos_sq + 1.0))
    b = alpha_pow * big_b / (36.0 * sin_sq)
    c = 6.0 * (1.0 + 2.0 * cos_sq) * alpha_pow
    n_opt = 2.0 * b / a
    capital_lambda = a * a / (4.0 * b * c * cfg.alpha**2)
    return BoundReport(
        a=a,
        b=b,
        c=c,
        big_b=big_b,
        n_opt=n_opt,
        capital_lambda=capital_lambda,
        lambda_upper_bound=-cfg.alpha**2 * (0.25 + capital_lambda),
    )
