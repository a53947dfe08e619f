from fractions import Fraction

import mpmath
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st
from mpmath.libmp import to_float

from oneline.balls import BallComplex, ball_from_decimal, ball_from_int, ball_from_rational, pi
from oneline.exceptions import ArgumentError, ConfigurationError, PoleError, UndecidedError
from oneline.oracles import borwein_zeta, dirichlet_logderiv, stirling_digamma
from oneline.zeta_eval import (
    EvalConfig, digamma, log_deriv, log_zeta_32, log_zeta_one_line, zeta_jet, zeta_with_derivative,
)


def point(re, im):
    return BallComplex(ball_from_decimal(re), ball_from_decimal(im))


class EvalConfigTest(SimpleTestCase):
    def test_rejects_bad_quadrature(self):
        with self.assertRaises(ConfigurationError):
            EvalConfig(quad_points=4)

    def test_rejects_short_jets(self):
        with self.assertRaises(ConfigurationError):
            EvalConfig(quad_points=3, jet_order=6)

    def test_terms_below_height(self):
        cfg = EvalConfig(em_terms=10)
        with self.assertRaises(ConfigurationError):
            cfg.terms_for(point('1', '100'))
        self.assertEqual(EvalConfig(em_terms=500).terms_for(point('1', '100')), 500)

    def test_settings_overrides(self):
        self.assertEqual(EvalConfig.from_settings(prec=96).prec, 96)


class ZetaTest(SimpleTestCase):
    def test_zeta_two(self):
        value, _ = zeta_with_derivative(BallComplex.from_real(2))
        self.assertTrue(value.re.overlaps(pi().square() / 6))
        self.assertTrue(value.im.contains(0))

    def test_matches_mpmath_on_the_one_line(self):
        for height in ('10', '100', '1000'):
            with self.subTest(t=height):
                value, derivative = zeta_with_derivative(point('1', height))
                with mpmath.workdps(60):
                    s = mpmath.mpc(1, mpmath.mpf(height))
                    self.assertTrue(value.contains(mpmath.zeta(s)))
                    self.assertTrue(derivative.contains(mpmath.zeta(s, derivative=1)))

    def test_pole(self):
        with self.assertRaises(PoleError):
            zeta_jet(BallComplex.from_real(1), 0)

    def test_height_ceiling(self):
        with self.assertRaises(ConfigurationError):
            zeta_jet(point('1', '2e7'), 0)

    def test_jet_coefficients(self):
        jet = zeta_jet(point('1.25', '30'), 3)
        with mpmath.workdps(60):
            s = mpmath.mpc('1.25', 30)
            for j in range(4):
                self.assertTrue(jet[j].contains(mpmath.zeta(s, derivative=j) / mpmath.factorial(j)))

    @settings(max_examples=8, deadline=None)
    @given(
        st.sampled_from(['0.75', '1', '1.5']),
        st.fractions(min_value=1, max_value=40, max_denominator=100),
    )
    def test_agrees_with_alternating_series(self, re, height):
        s = BallComplex(ball_from_decimal(re), ball_from_rational(height.numerator, height.denominator))
        value, derivative = zeta_with_derivative(s)
        other_value, other_derivative = borwein_zeta(s)
        self.assertTrue(value.overlaps(other_value))
        self.assertTrue(derivative.overlaps(other_derivative))


class LogDerivTest(SimpleTestCase):
    def test_agrees_with_dirichlet_series(self):
        for s in (BallComplex.from_real(2), point('2', '25'), point('1.75', '7.5')):
            with self.subTest(s=s.to_text(6)):
                self.assertTrue(log_deriv(s).overlaps(dirichlet_logderiv(s, terms=20_000)))

    def test_dirichlet_oracle_range(self):
        with self.assertRaises(ArgumentError):
            dirichlet_logderiv(point('1.25', '10'))

    def test_undecided_next_to_a_zero(self):
        s = BallComplex(ball_from_rational(1, 2, 8), ball_from_decimal('14.134725', 8))
        with self.assertRaises(UndecidedError):
            log_deriv(s, EvalConfig(prec=8))


class LogZetaTest(SimpleTestCase):
    def test_three_halves_line(self):
        value = log_zeta_32(ball_from_int(20))
        with mpmath.workdps(60):
            self.assertTrue(value.contains(mpmath.log(mpmath.zeta(mpmath.mpc('1.5', 20)))))

    def test_one_line(self):
        value = log_zeta_one_line(ball_from_int(100))
        with mpmath.workdps(60):
            self.assertTrue(value.contains(mpmath.log(mpmath.zeta(mpmath.mpc(1, 100)))))
        self.assertLess(to_float(value.re.rad), 1e-6)

    def test_one_line_needs_height(self):
        with self.assertRaises(ArgumentError):
            log_zeta_one_line(5)


class DigammaTest(SimpleTestCase):
    def test_against_stirling_and_mpmath(self):
        for z in (point('3', '4'), point('0.5', '10'), point('-2.5', '0.25'), point('1.5', '500000')):
            with self.subTest(z=z.to_text(6)):
                value = digamma(z)
                self.assertTrue(value.overlaps(stirling_digamma(z)))
                with mpmath.workdps(60):
                    self.assertTrue(value.contains(mpmath.digamma(mpmath.mpc(z.re.to_float(), z.im.to_float()))))

    def test_pole(self):
        with self.assertRaises(PoleError):
            digamma(BallComplex.from_real(-2))
        with self.assertRaises(PoleError):
            digamma(BallComplex.from_real(0))

    def test_real_axis(self):
        value = digamma(BallComplex.from_real(1))
        with mpmath.workdps(60):
            self.assertTrue(value.re.contains(-mpmath.euler))
        self.assertTrue(value.im.contains(Fraction(0)))
