from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st
from mpmath.libmp import from_int, mpf_le

from oneline.balls import (
    CERTIFIED_OK, CERTIFIED_VIOLATION, UNDECIDED, BallComplex, BallReal, ball_elementary, ball_from_decimal,
    ball_from_int, ball_from_rational, certified_sign, parse_decimal, pi, read_decimal, shortest_decimal,
)
from oneline.exceptions import ArgumentError, DomainError, ParseError
from oneline.oracles import machin_pi

decimals = st.decimals(min_value=-100, max_value=100, places=6, allow_nan=False, allow_infinity=False)


class ParseDecimalTest(SimpleTestCase):
    def test_exact_binary_fraction(self):
        ball = ball_from_decimal('0.5')
        self.assertTrue(ball.is_exact())
        self.assertTrue(ball.contains(Fraction(1, 2)))

    def test_tenth_is_enclosed(self):
        ball = ball_from_decimal('0.1')
        self.assertFalse(ball.is_exact())
        self.assertTrue(ball.contains(Fraction(1, 10)))

    def test_long_numeral(self):
        ball = ball_from_decimal('1.2784645427610737951')
        self.assertTrue(ball.contains(Fraction(12784645427610737951, 10 ** 19)))

    def test_exponent_forms(self):
        self.assertEqual(parse_decimal('3e12'), Fraction(3 * 10 ** 12))
        self.assertEqual(parse_decimal('-2.5E-3'), Fraction(-1, 400))
        self.assertEqual(parse_decimal('.25'), Fraction(1, 4))

    def test_malformed(self):
        for text in ('', 'abc', '1.2.3', '--1', 'e5', '1e'):
            with self.subTest(text=text):
                with self.assertRaises(ParseError):
                    ball_from_decimal(text)

    def test_huge_exponent_rejected(self):
        with self.assertRaises(ParseError):
            parse_decimal('1e1000000')


class BallRealTest(SimpleTestCase):
    def test_exp_and_log_at_identity_points(self):
        self.assertTrue(ball_from_int(0).exp().contains(1))
        self.assertTrue(ball_from_int(1).log().contains(0))

    def test_pi_matches_machin(self):
        self.assertTrue(pi(128).overlaps(machin_pi(128)))
        self.assertTrue(pi(256).overlaps(machin_pi(256)))

    def test_log_needs_positive_ball(self):
        with self.assertRaises(DomainError):
            ball_from_int(0).log()
        with self.assertRaises(DomainError):
            ball_from_decimal('-0.5').log()

    def test_division_by_ball_containing_zero(self):
        straddling = BallReal.from_interval(from_int(-1), from_int(1))
        with self.assertRaises(DomainError):
            ball_from_int(1) / straddling

    def test_sqrt_of_negative(self):
        with self.assertRaises(DomainError):
            ball_from_int(-4).sqrt()
        self.assertTrue(ball_from_int(4).sqrt().contains(2))

    def test_negative_radius_rejected(self):
        with self.assertRaises(ArgumentError):
            BallReal(from_int(1), from_int(-1))

    def test_intersect_and_union(self):
        a = BallReal.from_interval(from_int(0), from_int(2))
        b = BallReal.from_interval(from_int(1), from_int(3))
        self.assertTrue(a.intersect(b).contains(Fraction(3, 2)))
        self.assertTrue(a.union(b).contains(a))
        self.assertTrue(a.union(b).contains(b))
        with self.assertRaises(ArgumentError):
            a.intersect(ball_from_int(5))

    def test_integer_power_of_negative_base(self):
        self.assertTrue(ball_from_int(-2).pow(3).contains(-8))

    def test_certified_sign(self):
        self.assertEqual(certified_sign(ball_from_decimal('0.1')), CERTIFIED_OK)
        self.assertEqual(certified_sign(ball_from_decimal('-0.1')), CERTIFIED_VIOLATION)
        self.assertEqual(certified_sign(BallReal.from_interval(from_int(-1), from_int(1))), UNDECIDED)

    def test_elementary_dispatch(self):
        self.assertTrue(ball_elementary('mul', ball_from_int(3), ball_from_int(4)).contains(12))
        with self.assertRaises(ArgumentError):
            ball_elementary('tan', ball_from_int(1))

    @settings(max_examples=40, deadline=None)
    @given(decimals, decimals)
    def test_sum_and_product_contain_exact_value(self, a, b):
        x, y = ball_from_decimal(str(a)), ball_from_decimal(str(b))
        exact_a, exact_b = Fraction(a), Fraction(b)
        self.assertTrue((x + y).contains(exact_a + exact_b))
        self.assertTrue((x * y).contains(exact_a * exact_b))
        if exact_b:
            self.assertTrue((x / y).contains(exact_a / exact_b))

    @settings(max_examples=30, deadline=None)
    @given(st.fractions(min_value=Fraction(1, 1000), max_value=1000, max_denominator=10 ** 6))
    def test_exp_inverts_log(self, value):
        ball = ball_from_rational(value.numerator, value.denominator)
        self.assertTrue(ball.log().exp().contains(value))

    @settings(max_examples=30, deadline=None)
    @given(decimals, decimals)
    def test_refinement_shrinks_and_overlaps(self, a, b):
        def expression(prec):
            x, y = ball_from_decimal(str(a), prec), ball_from_decimal(str(b), prec)
            return x.exp() * y + (abs(y) + 1).log()

        coarse, fine = expression(64), expression(256)
        self.assertTrue(coarse.overlaps(fine))
        self.assertTrue(mpf_le(fine.rad, coarse.rad))


class BallComplexTest(SimpleTestCase):
    def test_log_of_minus_one(self):
        value = BallComplex.from_real(-1).log()
        self.assertTrue(value.re.contains(0))
        self.assertTrue(value.im.overlaps(pi()))

    def test_log_on_the_cut_is_undecided(self):
        z = BallComplex(ball_from_int(-1), BallReal.from_interval(from_int(-1), from_int(1)))
        with self.assertRaises(DomainError):
            z.log()

    def test_log_of_zero_ball(self):
        with self.assertRaises(DomainError):
            BallComplex.from_real(0).log()

    def test_modulus(self):
        z = BallComplex(ball_from_int(3), ball_from_int(4))
        self.assertTrue(abs(z).contains(5))

    def test_exp_log_round_trip(self):
        z = BallComplex(ball_from_decimal('0.75'), ball_from_decimal('-2.5'))
        self.assertTrue(z.log().exp().overlaps(z))

    def test_division(self):
        z = BallComplex(ball_from_int(1), ball_from_int(1))
        quotient = z / BallComplex(ball_from_int(0), ball_from_int(1))
        self.assertTrue(quotient.contains(complex(1, -1)))
        with self.assertRaises(DomainError):
            z / BallComplex.from_real(0)


class DecimalTextTest(SimpleTestCase):
    @settings(max_examples=40, deadline=None)
    @given(st.floats(min_value=-1e300, max_value=1e300, allow_nan=False, allow_infinity=False))
    def test_shortest_decimal_reads_back(self, value):
        ball = BallReal.exact(value)
        text = shortest_decimal(ball.mid, 128)
        self.assertEqual(read_decimal(text, 128), ball.mid)

    def test_to_text(self):
        self.assertTrue(ball_from_decimal('2.5').to_text(5).startswith('2.5'))
