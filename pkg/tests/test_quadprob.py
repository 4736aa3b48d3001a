import math

import numpy as np
import pytest
from scipy.special import ndtr, roots_legendre

from ratio_normal import (
    SingularCorrelation,
    bvn_orthant_f,
    quadrant_probs,
    quadrant_probs_any,
    quadrant_probs_singular,
    sample_bivariate,
    validate,
)
from conftest import random_param_sets


def _q1_by_2d_quadrature(p, n=220):
    """Independent oracle: tensor Gauss-Legendre over [0, 12*sigma]^2."""
    z, w = roots_legendre(n)

    def scale(lo, hi):
        return 0.5 * (hi - lo) * z + 0.5 * (hi + lo), 0.5 * (hi - lo) * w

    s1, w1 = scale(0.0, p.mu1 + 12 * p.sigma1)
    s2, w2 = scale(0.0, p.mu2 + 12 * p.sigma2)
    om = 1 - p.rho**2
    u2 = (s2 - p.mu2) / p.sigma2
    m = p.mu1 + p.rho * p.sigma1 / p.sigma2 * (s2 - p.mu2)
    a = np.exp(-0.5 * ((s1[:, None] - m[None, :]) / (p.sigma1 * math.sqrt(om))) ** 2)
    b = np.exp(-0.5 * u2 * u2)
    dens = a * b[None, :] / (2 * math.pi * p.sigma1 * p.sigma2 * math.sqrt(om))
    return float(w1 @ dens @ w2)


class TestOrthantF:
    def test_zero_mean_independent(self):
        assert bvn_orthant_f(validate(0, 0, 1, 1, 0), 0.0, 0.0) == pytest.approx(0.25, abs=1e-14)

    def test_independence_factorization(self):
        p = validate(1, 1, 1, 1, 0)
        want = (1 - ndtr(1.0)) ** 2
        assert bvn_orthant_f(p, 0.0, 0.0) == pytest.approx(want, rel=1e-12)
        assert want == pytest.approx(0.0251715, abs=5e-8)

    def test_arcsine_law(self):
        # classical orthant formula F(0,0) = 1/4 + arcsin(rho)/(2*pi) at zero means
        for rho in (-0.8, -0.3, 0.5, 0.9):
            p = validate(0, 0, 1, 1, rho)
            want = 0.25 + math.asin(rho) / (2 * math.pi)
            assert bvn_orthant_f(p, 0.0, 0.0) == pytest.approx(want, abs=1e-11)

    def test_infinite_arguments_collapse(self):
        p = validate(0.3, -0.7, 1.2, 0.8, 0.4)
        assert bvn_orthant_f(p, math.inf, math.inf) == 1.0
        assert bvn_orthant_f(p, math.inf, 0.0) == pytest.approx(float(ndtr(0.7 / 0.8)), rel=1e-13)
        assert bvn_orthant_f(p, 0.0, math.inf) == pytest.approx(float(ndtr(-0.3 / 1.2)), rel=1e-13)

    def test_singular_raises(self):
        with pytest.raises(SingularCorrelation):
            bvn_orthant_f(validate(1, 1, 1, 1, -1), 0.0, 0.0)


class TestQuadrantProbs:
    def test_zero_mean_uncorrelated_quarters(self):
        q = quadrant_probs(validate(0, 0, 1, 1, 0))
        for v in (q.q1, q.q2, q.q3, q.q4):
            assert v == pytest.approx(0.25, abs=1e-12)
        assert q.h_top == pytest.approx(0.5, abs=1e-12)
        assert q.h_bottom == pytest.approx(0.5, abs=1e-12)

    def test_zero_mean_arcsine_thirds(self):
        q = quadrant_probs(validate(0, 0, 1, 1, 0.5))
        assert q.q1 == pytest.approx(1 / 3, abs=1e-10)
        assert q.q3 == pytest.approx(1 / 3, abs=1e-10)
        assert q.q2 == pytest.approx(1 / 6, abs=1e-10)
        assert q.q4 == pytest.approx(1 / 6, abs=1e-10)

    def test_deep_positive_means(self):
        q = quadrant_probs(validate(3, 3, 1, 1, 0))
        assert q.q1 == pytest.approx(float(ndtr(3.0)) ** 2, rel=1e-10)

    def test_partition_and_halfplane_identities(self):
        for p in random_param_sets(15, seed=41):
            q = quadrant_probs(p)
            assert q.q1 + q.q2 + q.q3 + q.q4 == pytest.approx(1.0, abs=1e-10)
            assert q.h_top == pytest.approx(q.q1 + q.q2, abs=1e-10)
            assert q.h_bottom == pytest.approx(q.q3 + q.q4, abs=1e-10)
            # the top half-plane mass has a one-dimensional closed form
            assert q.h_top == pytest.approx(float(ndtr(p.mu2 / p.sigma2)), abs=1e-10)

    def test_against_2d_quadrature(self):
        for p in random_param_sets(5, seed=42, rho_range=(-0.85, 0.85)):
            want = _q1_by_2d_quadrature(p)
            assert quadrant_probs(p).q1 == pytest.approx(want, abs=1e-8)

    def test_mc_agreement_spot(self):
        for i, p in enumerate(random_param_sets(3, seed=43)):
            q = quadrant_probs(p)
            batch = sample_bivariate(p, 200_000, seed=900 + i)
            for j, name in enumerate(("q1", "q2", "q3", "q4")):
                prob = getattr(q, name)
                freq = batch.quadrant_counts[j] / batch.n
                se = math.sqrt(max(prob * (1 - prob), 1e-12) / batch.n)
                assert abs(freq - prob) <= 4 * se


class TestQuadrantProbsSingular:
    def test_unit_parameters(self):
        q = quadrant_probs_singular(validate(1, 1, 1, 1, -1))
        want_q1 = float(ndtr(1.0) - ndtr(-1.0))
        assert q.q1 == pytest.approx(want_q1, rel=1e-12)
        assert q.q1 == pytest.approx(0.6826895, abs=5e-8)
        assert q.q3 == 0.0

    def test_partition(self):
        for mu1, mu2, s1, s2 in ((1, 1, 1, 1), (0.4, 2.5, 1.3, 0.6), (3, 0.5, 0.2, 1.9)):
            q = quadrant_probs_singular(validate(mu1, mu2, s1, s2, -1))
            assert q.q1 + q.q2 + q.q3 + q.q4 == pytest.approx(1.0, abs=1e-12)

    def test_numerator_almost_surely_positive(self):
        q = quadrant_probs_singular(validate(1e8, 1.0, 1.0, 2.0, -1))
        assert q.q1 == pytest.approx(float(ndtr(0.5)), rel=1e-12)

    def test_continuity_against_nonsingular(self):
        for mu1, mu2, s1, s2 in ((1, 1, 1, 1), (0.7, 2, 0.4, 1.3), (2, 0.6, 1.5, 0.3)):
            qa = quadrant_probs(validate(mu1, mu2, s1, s2, -1 + 1e-6))
            qb = quadrant_probs_singular(validate(mu1, mu2, s1, s2, -1))
            for name in ("q1", "q2", "q3", "q4"):
                assert abs(getattr(qa, name) - getattr(qb, name)) < 1e-3

    def test_dispatch_helper(self):
        qa = quadrant_probs_any(validate(1, 1, 1, 1, -1))
        qb = quadrant_probs_singular(validate(1, 1, 1, 1, -1))
        assert qa == qb
