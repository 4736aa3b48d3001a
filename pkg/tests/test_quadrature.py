import math

import numpy as np
import pytest
from scipy.integrate import quad as scipy_quad
from scipy.special import ndtr

from ratio_normal import quadrature
from ratio_normal.quadrature import (
    _orthant_np,
    _ratio_halfline_np,
    adaptive_quad,
    orthant_integral,
    ratio_halfline_integral,
)
from conftest import random_param_sets


def _ratio_integrand(s, x, mu1, mu2, s1, s2, rho):
    om = 1 - rho * rho
    u2 = (s - mu2) / s2
    u1 = (x * s - (mu1 + rho * s1 / s2 * (s - mu2))) / (s1 * math.sqrt(om))
    return s / (2 * math.pi * s1 * s2 * math.sqrt(om)) * math.exp(-0.5 * (u1 * u1 + u2 * u2))


class TestAdaptiveQuad:
    def test_normal_density_integrates_to_one(self):
        val, err = adaptive_quad(
            lambda z: np.exp(-0.5 * z * z) / math.sqrt(2 * math.pi),
            np.linspace(-12, 12, 9),
        )
        assert val == pytest.approx(1.0, abs=1e-12)
        assert err < 1e-10

    def test_resolves_seeded_spike(self):
        # a Gaussian of width 1e-4 is found because breakpoints straddle it;
        # seeds at +-8 widths leave only ~1e-15 of the mass beyond the comb,
        # matching the production seeding of the half-line kernel
        w = 1e-4
        val, _ = adaptive_quad(
            lambda z: np.exp(-0.5 * ((z - 0.3) / w) ** 2),
            np.array([0.0, 0.3 - 8 * w, 0.3 - 4 * w, 0.3, 0.3 + 4 * w, 0.3 + 8 * w, 1.0]),
            tol_abs=1e-16,
            tol_rel=1e-12,
        )
        assert val == pytest.approx(w * math.sqrt(2 * math.pi), rel=1e-11)

    def test_polynomial_exact(self):
        val, _ = adaptive_quad(lambda z: z**6, np.array([0.0, 2.0]))
        assert val == pytest.approx(2.0**7 / 7, rel=1e-14)


class TestRatioKernelAgainstScipy:
    def test_matches_scipy_quad(self):
        for p in random_param_sets(6, seed=207):
            hi = max(p.mu2, 0) + 12 * p.sigma2
            for x in (-7.0, -0.9, 0.4, 1.1, 25.0):
                got = ratio_halfline_integral(
                    np.array([x]), p.mu1, p.mu2, p.sigma1, p.sigma2, p.rho
                )[0]
                want, _ = scipy_quad(
                    _ratio_integrand,
                    0.0,
                    hi,
                    args=(x, p.mu1, p.mu2, p.sigma1, p.sigma2, p.rho),
                    limit=200,
                    epsabs=1e-13,
                    epsrel=1e-12,
                )
                assert got == pytest.approx(want, rel=1e-9, abs=1e-15)

    def test_sharp_large_x_regime(self):
        # at large x the integrand is a needle of width ~1/x near s = 0
        p = random_param_sets(1, seed=3)[0]
        x = 1e5
        got = ratio_halfline_integral(np.array([x]), p.mu1, p.mu2, p.sigma1, p.sigma2, p.rho)[0]
        want, _ = scipy_quad(
            _ratio_integrand,
            0.0,
            1.0,
            args=(x, p.mu1, p.mu2, p.sigma1, p.sigma2, p.rho),
            limit=400,
            epsabs=1e-30,
            epsrel=1e-12,
            points=[1e-6, 1e-5, 1e-4],
        )
        assert got == pytest.approx(want, rel=1e-8)


class TestBackendsAgree:
    def test_ratio_kernel_backends(self):
        for p in random_param_sets(4, seed=208):
            xs = np.array([-4.0, -0.5, 0.7, 3.0, 40.0])
            a = ratio_halfline_integral(xs, p.mu1, p.mu2, p.sigma1, p.sigma2, p.rho)
            b = _ratio_halfline_np(xs, p.mu1, p.mu2, p.sigma1, p.sigma2, p.rho, 1e-12, 1e-10)
            np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-18)

    def test_orthant_kernel_backends(self):
        for args in [(0.7, 0.3, -0.7, -0.2), (2.0, -1.0, 2.0, 0.5), (0.1, 0.0, 0.1, 0.0)]:
            a = orthant_integral(*args)
            b = _orthant_np(*args, tol_abs=1e-13, tol_rel=1e-12)
            assert a == pytest.approx(b, rel=1e-10, abs=1e-14)


class TestOrthantKernel:
    def test_against_scipy(self):
        def f(z, p1, q1, p2, q2):
            return ndtr(p1 * z + q1) * ndtr(p2 * z + q2) * math.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)

        for args in [(0.5, 0.1, -0.5, 0.4), (3.0, -2.0, 3.0, 1.0)]:
            want, _ = scipy_quad(f, -12, 12, args=args, limit=200, epsabs=1e-13, epsrel=1e-12)
            assert orthant_integral(*args) == pytest.approx(want, rel=1e-10)

    def test_near_singular_correlation_step(self):
        # |rho| -> 1 makes the CDF factors near-steps; refinement must resolve them
        r = 1 - 1e-6
        scale = math.sqrt(r) / math.sqrt(1 - r)
        got = orthant_integral(scale, 0.5 * scale / math.sqrt(r), scale, -0.2 * scale / math.sqrt(r))
        # comparison value: with rho -> 1, F = P(Z <= min(a1, a2)) at the
        # one-factor representation; here a1 = 0.5, a2 = -0.2
        assert got == pytest.approx(ndtr(-0.2), abs=2e-4)
