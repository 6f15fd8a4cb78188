"""Special-function contracts, checked against independent oracles:
plain Taylor/quadrature reimplementations in the tests, scipy, mpmath."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special, stats

from fama_lab import specfun
from fama_lab.errors import DomainError, ResolutionExceededError

mpmath.mp.dps = 30


def j0_series_oracle(x, terms=80):
    """Independent plain power series (no compensation, no dispatch)."""
    u = 0.25 * x * x
    term, total = 1.0, 1.0
    for m in range(1, terms):
        term *= -u / (m * m)
        total += term
    return total


class TestBesselJ0:
    def test_at_zero(self):
        assert specfun.bessel_j0(0.0) == 1.0

    def test_half_pi_squared_near_022(self):
        assert abs(specfun.bessel_j0(0.5 * math.pi) ** 2 - 0.22) <= 0.01

    def test_first_zero_from_series_bisection(self):
        lo, hi = 2.0, 3.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if j0_series_oracle(lo) * j0_series_oracle(mid) <= 0.0:
                hi = mid
            else:
                lo = mid
        root = 0.5 * (lo + hi)
        assert root == pytest.approx(2.404826, abs=1e-6)
        assert abs(specfun.bessel_j0(root)) < 1e-12
        assert abs(specfun.bessel_j0(2.404826)) < 1e-6

    def test_accuracy_vs_mpmath(self):
        rng = np.random.default_rng(42)
        xs = np.concatenate([
            np.linspace(0.01, 20.0, 60),
            rng.uniform(0.0, 500.0, 120),
            [7.99, 8.0, 8.01, 499.5, 500.0],
        ])
        for x in xs:
            ref = float(mpmath.besselj(0, mpmath.mpf(float(x))))
            got = specfun.bessel_j0(float(x))
            # near the zeros of an oscillatory function, double-precision
            # argument reduction caps the achievable absolute error at
            # ~x*eps*amplitude, so allow 1e-13 absolute as the alternative
            err = abs(got - ref)
            assert err <= max(1e-12 * abs(ref), 1e-13), f"x={x}"

    def test_bounded_and_even(self):
        xs = np.linspace(0.0, 500.0, 5001)
        vals = np.array([specfun.bessel_j0(float(x)) for x in xs])
        assert np.all(np.abs(vals) <= 1.0 + 1e-15)
        assert specfun.bessel_j0(-3.7) == specfun.bessel_j0(3.7)

    def test_sign_changes_bracket_scipy_zeros(self):
        for z in special.jn_zeros(0, 150):
            assert specfun.bessel_j0(z - 1e-4) * specfun.bessel_j0(z + 1e-4) < 0.0

    def test_branch_overlap_band(self):
        # series and asymptotic branches must agree through the 8.0 split
        for x in np.linspace(7.5, 8.5, 81):
            a = specfun._j0_series(float(x))
            b = specfun._j_asymptotic(0, float(x))
            assert abs(a - b) <= 1e-12

    def test_domain_error(self):
        with pytest.raises(DomainError):
            specfun.bessel_j0(float("nan"))
        with pytest.raises(DomainError):
            specfun.bessel_j0(float("inf"))


class TestBesselJ1:
    def test_accuracy_vs_mpmath(self):
        for x in np.linspace(0.05, 60.0, 121):
            ref = float(mpmath.besselj(1, mpmath.mpf(float(x))))
            assert abs(specfun.bessel_j1(float(x)) - ref) <= 1e-12

    def test_odd(self):
        assert specfun.bessel_j1(-2.0) == -specfun.bessel_j1(2.0)


class TestBesselI0:
    def test_at_zero(self):
        assert specfun.bessel_i0_scaled(0.0) == 1.0

    def test_i0_of_one_vs_series_oracle(self):
        u = 0.25
        term, total = 1.0, 1.0
        for m in range(1, 40):
            term *= u / (m * m)
            total += term
        assert total == pytest.approx(1.266066, abs=1e-6)
        assert math.e * specfun.bessel_i0_scaled(1.0) == pytest.approx(total, rel=1e-12)

    def test_accuracy_vs_mpmath(self):
        for x in np.concatenate([np.linspace(0.0, 30.0, 40),
                                 np.geomspace(30.0, 700.0, 30)]):
            ref = float(mpmath.besseli(0, mpmath.mpf(float(x)))
                        * mpmath.exp(-mpmath.mpf(float(x))))
            assert abs(specfun.bessel_i0_scaled(float(x)) - ref) <= 1e-10 * ref

    def test_lower_bound_exp_over_1p2x(self):
        # I0(x) >= e^x/(1+2x)  <=>  i0e(x)(1+2x) >= 1
        for x in np.linspace(0.0, 200.0, 801):
            assert specfun.bessel_i0_scaled(float(x)) * (1.0 + 2.0 * x) >= 1.0 - 1e-12

    def test_unscaled_recoverable_small_x(self):
        assert specfun.bessel_i0(2.5) == pytest.approx(
            float(mpmath.besseli(0, 2.5)), rel=1e-10)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            specfun.bessel_i0_scaled(-0.1)


class TestMarcumQ1:
    def test_b_zero_is_one(self):
        for a in (0.0, 0.5, 3.0, 40.0):
            assert specfun.marcum_q1(a, 0.0) == 1.0

    def test_a_zero_collapses(self):
        for b in (0.1, 1.0, 4.5):
            assert specfun.marcum_q1(0.0, b) == pytest.approx(
                math.exp(-0.5 * b * b), rel=1e-13)

    def test_defining_integral_oracle(self):
        # Q1(a,b) = int_b^inf x e^{-(x^2+a^2)/2} I0(ax) dx, via scipy quad
        for a, b in [(1.0, 1.0), (0.5, 2.5), (3.0, 1.0), (2.0, 2.0)]:
            ref, err = integrate.quad(
                lambda x: x * math.exp(-0.5 * (x * x + a * a) + a * x)
                * special.i0e(a * x), b, b + 60.0, limit=300)
            assert err < 1e-10
            assert specfun.marcum_q1(a, b) == pytest.approx(ref, abs=1e-8)

    def test_vs_scipy_ncx2_grid(self):
        g = np.linspace(0.0, 6.0, 25)
        for a in g:
            for b in g:
                ref = stats.ncx2.sf(b * b, 2,a * a) if a > 0 else math.exp(-0.5 * b * b)
                assert abs(specfun.marcum_q1(float(a), float(b)) - ref) <= 1e-10

    def test_monotonicity_50x50(self):
        g = np.linspace(0.0, 5.0, 50)
        vals = np.array([[specfun.marcum_q1(float(a), float(b)) for b in g]
                         for a in g])
        assert np.all(np.diff(vals, axis=1) <= 1e-14)   # nonincreasing in b
        assert np.all(np.diff(vals, axis=0) >= -1e-14)  # nondecreasing in a

    def test_lemma2_lower_bound(self):
        # Q1(al, be) >= e^{-(al^2+be^2)/2} I0(al be)
        g = np.linspace(0.0, 5.0, 26)
        for al in g:
            for be in g:
                lb = (math.exp(-0.5 * (al - be) ** 2)
                      * specfun.bessel_i0_scaled(al * be))
                assert specfun.marcum_q1(float(al), float(be)) >= lb - 1e-12

    def test_extreme_arguments(self):
        assert specfun.marcum_q1(200.0, 1.0) == pytest.approx(1.0, abs=1e-10)
        assert specfun.marcum_q1(1.0, 200.0) == 0.0
        assert abs(specfun.marcum_q1(200.0, 200.0)
                   - stats.ncx2.sf(4e4, 2, 4e4)) < 1e-10

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            specfun.marcum_q1(-1.0, 1.0)
        with pytest.raises(DomainError):
            specfun.marcum_q1(1.0, float("nan"))

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.0, 30.0), st.floats(0.0, 30.0))
    def test_in_unit_interval(self, a, b):
        assert 0.0 <= specfun.marcum_q1(a, b) <= 1.0


class TestExpintEn:
    def test_e0_closed_form(self):
        assert specfun.expint_en(0, 2.0) == pytest.approx(
            math.exp(-2.0) / 2.0, rel=1e-15)

    def test_e1_of_one_quadrature_oracle(self):
        ref, _ = integrate.quad(lambda t: math.exp(-t) / t, 1.0, 80.0, limit=200)
        assert ref == pytest.approx(0.219384, abs=1e-6)
        assert specfun.expint_en(1, 1.0) == pytest.approx(ref, rel=1e-10)

    def test_recurrence_grid(self):
        # k E_{k+1}(x) + x E_k(x) = e^{-x}
        for k in (0, 1, 2, 7, 33, 128, 511):
            for x in (0.05, 0.5, 1.5, 1.6, 4.0, 30.0, 200.0):
                res = (k * specfun.expint_en(k + 1, x)
                       + x * specfun.expint_en(k, x) - math.exp(-x))
                assert abs(res) <= 1e-9, (k, x)

    def test_vs_scipy_grid_up_to_512(self):
        for k in (1, 2, 3, 8, 64, 512):
            for x in (0.1, 0.7, 1.5, 1.501, 3.0, 20.0, 100.0):
                ref = special.expn(k, x)
                assert specfun.expint_en(k, x) == pytest.approx(ref, rel=1e-10)

    def test_scaled_consistency(self):
        for k in (0, 1, 5, 100):
            for x in (0.2, 1.0, 2.0, 50.0):
                assert specfun.expint_en_scaled(k, x) == pytest.approx(
                    math.exp(x) * specfun.expint_en(k, x), rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            specfun.expint_en(1, 0.0)
        with pytest.raises(DomainError):
            specfun.expint_en(1, -2.0)
        with pytest.raises(DomainError):
            specfun.expint_en(-1, 1.0)


class TestAppendixCIdentity:
    def test_integral_matches_expint(self):
        # int_0^inf (e^{-ax}/(1+bx))^k dx = e^{ka/b} E_k(ka/b) / b
        for k in range(1, 9):
            for a in (0.5, 1.0, 2.0):
                for b in (0.5, 1.0, 2.0):
                    lhs, _ = integrate.quad(
                        lambda x: (math.exp(-a * x) / (1.0 + b * x)) ** k,
                        0.0, np.inf, limit=300)
                    rhs = specfun.expint_en_scaled(k, k * a / b) / b
                    assert abs(lhs - rhs) <= 1e-8, (k, a, b)


class TestLemma1Identity:
    def test_closed_form_matches_quadrature(self):
        # int_0^inf x e^{-x^2/2} I0(cx) Q1(b, ax) dx
        #   = e^{c^2/2} Q1(b/s, ac/s) - (a^2/s^2) e^{(c^2-b^2)/(2s^2)} I0(abc/s^2)
        # with s = sqrt(a^2+1); evaluated in scaled form to avoid overflow.
        for a in (0.2, 1.6, 3.0):
            for b in (0.2, 1.6, 3.0):
                for c in (0.2, 1.6, 3.0):
                    lhs, _ = integrate.quad(
                        lambda x: x * math.exp(-0.5 * x * x + c * x)
                        * specfun.bessel_i0_scaled(c * x)
                        * specfun.marcum_q1(b, a * x), 0.0, 60.0, limit=300)
                    s2 = a * a + 1.0
                    s = math.sqrt(s2)
                    rhs = (math.exp(0.5 * c * c)
                           * specfun.marcum_q1(b / s, a * c / s)
                           - (a * a / s2)
                           * math.exp((c * c - b * b) / (2.0 * s2) + a * b * c / s2)
                           * specfun.bessel_i0_scaled(a * b * c / s2))
                    assert abs(lhs - rhs) <= 1e-7, (a, b, c)


class TestEnvelope:
    def test_table_invariants(self):
        tab = specfun.j0_envelope_table()
        assert tab.abscissae[0] == 0.0 and tab.peaks[0] == 1.0
        assert all(a < b for a, b in zip(tab.abscissae, tab.abscissae[1:]))
        assert all(p1 > p2 for p1, p2 in zip(tab.peaks, tab.peaks[1:]))
        assert tab.cap == tab.abscissae[-1]

    def test_peaks_sit_at_j1_zeros(self):
        tab = specfun.j0_envelope_table()
        j1z = special.jn_zeros(1, 10)
        for i, z in enumerate(j1z, start=1):
            # golden section stalls in flat-maximum rounding noise ~1e-8;
            # the peak values below are still accurate to ~1e-16
            assert tab.abscissae[i] == pytest.approx(z, abs=1e-6)
            assert tab.peaks[i] == pytest.approx(abs(special.j0(z)), abs=1e-12)

    def test_inverse_of_one_is_zero(self):
        assert specfun.j0_envelope_inverse(1.0) == 0.0

    def test_dense_scan_oracle(self):
        # oracle: smallest grid point past which |J0| stays below mu_star
        xs = np.arange(0.0, 80.0, 1e-4)
        j = np.abs(special.j0(xs))
        for mu in (0.4, 0.403, 0.25, 0.1):
            above = np.nonzero(j > mu)[0]
            oracle = xs[above[-1] + 1]
            got = specfun.j0_envelope_inverse(mu)
            assert got == pytest.approx(oracle, abs=2e-4)
            assert abs(specfun.bessel_j0(got)) == pytest.approx(mu, abs=1e-6)
            tail = np.abs(special.j0(np.arange(got, 80.0, 1e-4)))
            assert np.all(tail <= mu + 1e-5)

    def test_just_above_first_interior_peak(self):
        # |J0|'s first interior peak is 0.402759; 0.403 unlocks the 0-lobe
        got = specfun.j0_envelope_inverse(0.403)
        assert 1.0 < got < 2.405

    def test_antitone(self):
        mus = [0.95, 0.7, 0.41, 0.403, 0.35, 0.2, 0.1, 0.05]
        rhos = [specfun.j0_envelope_inverse(m) for m in mus]
        assert all(r2 >= r1 for r1, r2 in zip(rhos, rhos[1:]))

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.05, 1.0), st.floats(0.05, 1.0))
    def test_antitone_property(self, m1, m2):
        lo, hi = sorted((m1, m2))
        assert (specfun.j0_envelope_inverse(lo)
                >= specfun.j0_envelope_inverse(hi) - 1e-12)

    def test_resolution_exceeded(self):
        with pytest.raises(ResolutionExceededError) as exc:
            specfun.j0_envelope_inverse(1e-3)
        assert exc.value.cap > 400.0
        assert f"{exc.value.cap:.1f}" in str(exc.value)

    def test_domain(self):
        with pytest.raises(DomainError):
            specfun.j0_envelope_inverse(0.0)
        with pytest.raises(DomainError):
            specfun.j0_envelope_inverse(1.5)
