import math

import numpy as np
import pytest

from wedgebound import DomainError, WedgeConfig, closed_J, closed_R, integrate, quad_J


def _antiderivative_piece(rho: float) -> float:
    # closed form of the integral of s*(2-s)**(2*rho-1) over [0, 1]
    return (2.0 ** (2 * rho) - 1.0) / rho - (2.0 ** (2 * rho + 1) - 1.0) / (2 * rho + 1)


class TestIntegrate:
    def test_two_sided_exponential(self):
        est = integrate(lambda x: math.exp(-abs(x)), -math.inf, math.inf, breakpoints=(0.0,))
        assert est.converged
        assert est.value == pytest.approx(2.0, abs=1e-12)
        assert est.abs_error_estimate >= 0.0

    @pytest.mark.parametrize("rho", [0.25, 0.5, 0.7, 0.95])
    def test_profile_moment_against_antiderivative(self, rho):
        est = integrate(lambda s: s * (2.0 - s) ** (2 * rho - 1.0), 0.0, 1.0)
        assert est.converged
        assert est.value == pytest.approx(_antiderivative_piece(rho), rel=1e-12)

    def test_profile_moment_at_half(self):
        # integrand reduces to s, so the value is exactly 1/2
        est = integrate(lambda s: s * (2.0 - s) ** 0.0, 0.0, 1.0)
        assert est.value == pytest.approx(0.5, rel=1e-13)

    def test_left_exponential_tail(self):
        # exp((2*rho+1)*x*tan(theta)) over (-inf, 0], theta=pi/4, rho=0.5
        est = integrate(lambda x: math.exp(2.0 * x), -math.inf, 0.0)
        assert est.converged
        assert est.value == pytest.approx(0.5, rel=1e-12)

    def test_positivity(self):
        est = integrate(lambda x: x * x, -1.0, 2.0)
        assert est.value >= 0.0

    def test_linearity(self):
        f = lambda x: math.exp(-x * x)
        a = integrate(f, -math.inf, math.inf).value
        b = integrate(lambda x: 3.5 * f(x), -math.inf, math.inf).value
        assert b == pytest.approx(3.5 * a, rel=1e-12)

    def test_splitting(self):
        f = lambda x: math.exp(-abs(x)) * (1.0 + math.sin(x) ** 2)
        whole = integrate(f, -math.inf, math.inf, breakpoints=(0.0,))
        left = integrate(f, -math.inf, 0.0)
        right = integrate(f, 0.0, math.inf)
        assert whole.value == pytest.approx(
            left.value + right.value,
            abs=whole.abs_error_estimate + left.abs_error_estimate + right.abs_error_estimate + 1e-14,
        )

    def test_invalid_interval(self):
        with pytest.raises(DomainError):
            integrate(lambda x: x, 1.0, 0.0)
        with pytest.raises(DomainError):
            integrate(lambda x: x, 0.0, 1.0, abs_tol=-1.0)

    def test_budget_exhaustion_reports_best_estimate(self):
        est = integrate(
            lambda x: abs(math.sin(100.0 / (x + 1e-3))),
            0.0,
            1.0,
            abs_tol=1e-13,
            rel_tol=1e-13,
            budget=400,
        )
        assert not est.converged
        assert math.isfinite(est.value)
        with pytest.raises(Exception):
            est.require()


class TestQuadJ:
    def test_reference_point(self):
        cfg = WedgeConfig(theta=math.pi / 4, alpha=1.0)
        est = quad_J(cfg, 0.5)
        assert est.converged
        assert est.value == pytest.approx(1.0, rel=1e-11)

    def test_coupling_scaling(self):
        cfg = WedgeConfig(theta=math.pi / 4, alpha=2.0)
        assert quad_J(cfg, 0.5).value == pytest.approx(0.5, rel=1e-11)

    def test_rejects_bad_rho(self):
        cfg = WedgeConfig(theta=0.5, alpha=1.0)
        with pytest.raises(DomainError):
            quad_J(cfg, 0.0)

    def test_oracle_agreement_random(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            theta = rng.uniform(0.1, 1.5)
            alpha = rng.uniform(0.3, 3.0)
            cfg = WedgeConfig(theta=theta, alpha=alpha)
            rho = rng.uniform(0.05, 0.95) * cfg.cot_sq_theta
            j = quad_J(cfg, rho).require()
            assert j == pytest.approx(closed_J(cfg, rho), rel=1e-10)

    def test_relates_to_closed_energy(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            theta = rng.uniform(0.15, 1.45)
            alpha = rng.uniform(0.4, 2.5)
            cfg = WedgeConfig(theta=theta, alpha=alpha)
            rho = rng.uniform(0.1, 0.9) * cfg.cot_sq_theta
            j = quad_J(cfg, rho).require()
            lhs = rho * cfg.tan_theta**2 * (rho - cfg.cot_sq_theta) * j
            assert lhs == pytest.approx(closed_R(cfg, rho), rel=1e-10)
