import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratio_normal import (
    cap_phi,
    erfc_scaled,
    h,
    h_bounds,
    h_prime,
    h_prime_bounds,
    log_h,
    phi,
)

mp.mp.dps = 40


def h_oracle(w):
    w = mp.mpf(w)
    return 1 - mp.sqrt(mp.pi) * w * mp.exp(w * w) * mp.erfc(w)


class TestPhi:
    def test_at_zero(self):
        assert phi(0.0) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-15)

    def test_even(self):
        assert phi(1.0) == phi(-1.0)

    def test_graceful_underflow(self):
        assert phi(40.0) == 0.0  # exp(-800) is below the double range


class TestCapPhi:
    def test_half_at_zero(self):
        assert cap_phi(0.0) == 0.5

    def test_known_value(self):
        want = float(mp.ncdf(1))
        assert cap_phi(1.0) == pytest.approx(want, rel=1e-14)

    def test_far_tail_positive(self):
        got = cap_phi(-8.0)
        want = float(mp.ncdf(-8))
        assert got > 0
        assert got == pytest.approx(want, rel=1e-13)

    @given(st.floats(-37, 37))
    @settings(max_examples=200, deadline=None)
    def test_symmetry(self, z):
        assert cap_phi(z) + cap_phi(-z) == pytest.approx(1.0, abs=1e-15)


class TestErfcScaled:
    def test_at_zero(self):
        assert erfc_scaled(0.0) == 1.0

    def test_at_one(self):
        want = float(mp.exp(1) * mp.erfc(1))
        assert erfc_scaled(1.0) == pytest.approx(want, rel=1e-14)

    def test_large_argument_asymptote(self):
        # leading term 1/(sqrt(pi) w)
        assert erfc_scaled(50.0) == pytest.approx(1 / (math.sqrt(math.pi) * 50), rel=2e-4)

    def test_descaling_identity(self):
        # erfcx(w) * exp(-w^2) recovers erfc(w) to 1e-12 relative on [0, 25]
        for w in np.linspace(0.0, 25.0, 101):
            want = float(mp.erfc(mp.mpf(w)))
            assert erfc_scaled(w) * math.exp(-(w * w)) == pytest.approx(want, rel=1e-12)


class TestH:
    def test_at_zero(self):
        assert h(0.0) == 1.0

    def test_at_one(self):
        assert h(1.0) == pytest.approx(float(h_oracle(1)), rel=1e-13)

    def test_large_positive_leading_term(self):
        # h(10) = 1/200 up to a ~1.5% second-order correction
        assert h(10.0) == pytest.approx(1 / 200, rel=0.02)
        assert h(10.0) == pytest.approx(float(h_oracle(10)), rel=1e-13)

    def test_accuracy_across_regimes(self):
        # includes both sides of the direct/asymptotic switch at 6
        for w in [-26.0, -12.0, -3.0, -0.4, 0.3, 2.0, 5.999, 6.0, 6.001, 8.0, 30.0, 1e4]:
            assert h(w) == pytest.approx(float(h_oracle(w)), rel=5e-13), w

    def test_overflow_regime_raises(self):
        with pytest.raises(OverflowError):
            h(-27.5)

    def test_positive(self):
        for w in np.linspace(-26, 40, 200):
            assert h(float(w)) > 0


class TestLogH:
    def test_at_zero(self):
        assert log_h(0.0) == 0.0

    def test_deep_negative_form(self):
        # log h(-20) = 400 + log(2*sqrt(pi)*20) + delta, |delta| < 1e-3
        got = log_h(-20.0)
        assert abs(got - (400.0 + math.log(2 * math.sqrt(math.pi) * 20))) < 1e-3
        assert got == pytest.approx(float(mp.log(h_oracle(-20))), rel=1e-14)

    def test_matches_h_at_one(self):
        assert log_h(1.0) == pytest.approx(math.log(h(1.0)), rel=1e-14)

    def test_consistent_with_h_everywhere_representable(self):
        for w in np.linspace(-26, 100, 260):
            assert math.exp(log_h(float(w))) == pytest.approx(h(float(w)), rel=1e-10)

    def test_beyond_h_overflow(self):
        got = log_h(-100.0)
        assert got == pytest.approx(float(mp.log(h_oracle(-100))), rel=1e-14)


class TestHBounds:
    def test_bracket_at_one(self):
        b = h_bounds(1.0)
        assert b.lower == pytest.approx(1 - 2 / (1 + math.sqrt(1 + 4 / math.pi)), rel=1e-12)
        assert b.upper == pytest.approx(1 - 2 / (1 + math.sqrt(3)), rel=1e-12)
        assert b.lower <= h(1.0) <= b.upper

    def test_upper_tightens_to_leading_term(self):
        b = h_bounds(10.0)
        assert b.lower <= h(10.0) <= b.upper
        assert b.upper == pytest.approx(1 / 200, rel=0.011)

    def test_vanishing_limit(self):
        b = h_bounds(1e6)
        assert 0 < b.lower <= b.upper < 1e-11

    def test_contains_h_for_random_omegas(self):
        rng = np.random.default_rng(8)
        for w in rng.uniform(1e-3, 20.0, 1000):
            b = h_bounds(float(w))
            assert b.lower <= h(float(w)) <= b.upper

    def test_requires_positive(self):
        with pytest.raises(Exception):
            h_bounds(0.0)


def _fd_h_prime(w, step=1e-6):
    return (h(w + step) - h(w - step)) / (2 * step)


class TestHPrimeBounds:
    def test_at_zero(self):
        b = h_prime_bounds(0.0)
        assert b.lower == pytest.approx(-math.sqrt(math.pi), rel=1e-12)
        assert b.upper == pytest.approx(-math.sqrt(2), rel=1e-12)
        # exact h'(0) = -sqrt(pi) sits at the lower bracket
        assert _fd_h_prime(0.0) == pytest.approx(-math.sqrt(math.pi), abs=1e-6)

    def test_contains_finite_difference_at_one(self):
        b = h_prime_bounds(1.0)
        fd = _fd_h_prime(1.0)
        assert b.lower - 1e-4 <= fd <= b.upper + 1e-4

    def test_contains_exact_derivative_at_five(self):
        b = h_prime_bounds(5.0)
        assert b.lower <= h_prime(5.0) <= b.upper
        assert b.lower <= _fd_h_prime(5.0) + 1e-4
        assert b.upper >= _fd_h_prime(5.0) - 1e-4

    def test_contains_fd_for_random_omegas(self):
        rng = np.random.default_rng(9)
        for w in rng.uniform(1e-3, 20.0, 1000):
            b = h_prime_bounds(float(w))
            fd = _fd_h_prime(float(w))
            assert b.lower - 1e-4 <= fd <= b.upper + 1e-4

    @given(st.floats(0.01, 25.0))
    @settings(max_examples=200, deadline=None)
    def test_ordering(self, w):
        b = h_prime_bounds(w)
        assert b.lower <= b.upper


class TestHPrime:
    def test_matches_finite_difference(self):
        for w in (-5.0, -1.0, 0.0, 0.7, 3.0, 12.0):
            assert h_prime(w) == pytest.approx(_fd_h_prime(w), rel=1e-7, abs=1e-7)

    def test_overflows_to_inf_deep_negative(self):
        assert h_prime(-40.0) == -math.inf
