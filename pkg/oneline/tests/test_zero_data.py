import math
import tempfile
from fractions import Fraction
from pathlib import Path
from unittest import mock

import mpmath
from django.test import SimpleTestCase
from mpmath.libmp import to_float

from oneline import zero_data
from oneline.balls import ball_from_decimal
from oneline.exceptions import ArgumentError, CoverageError, ProximityError, ZeroFormatError
from oneline.zero_data import (
    check_proximity, e_enclosure, e_split_check, load_zeros, parse_zero_lines, partial_zero_sum, rvm_grid,
    rvm_residuals, rvm_slack, tail_envelope_check, tail_square_bound, write_zero_file, zero_sum_digamma_step,
    zero_sum_inequality_check,
)

FIXTURE = Path(__file__).parent / 'fixtures' / 'zeros_first30.txt'
THREE_ZEROS = ['14.134725142', '21.022039639', '25.010857580']


class ZeroFileTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.table = load_zeros(FIXTURE)

    def test_fixture(self):
        self.assertEqual(len(self.table), 30)
        self.assertEqual(self.table.gamma_max, Fraction('101.317851006'))
        self.assertEqual(self.table.claimed_complete_to, Fraction('101.317851006'))
        self.assertEqual(self.table.accuracy, Fraction(1, 10 ** 9))
        self.assertEqual(self.table.count_upto(50), 10)
        self.assertEqual(self.table.count_upto('49.773832478'), 10)

    def test_counts_follow_the_main_term(self):
        grid = rvm_grid(self.table)
        self.assertTrue((abs(rvm_residuals(self.table, grid)) <= rvm_slack(grid)).all())

    def test_truncation(self):
        short = self.table.truncated(10)
        self.assertEqual(len(short), 10)
        self.assertEqual(short.claimed_complete_to, Fraction('49.773832478'))
        with self.assertRaises(ArgumentError):
            self.table.truncated(0)

    def test_decreasing_ordinates(self):
        with self.assertRaises(ZeroFormatError) as ctx:
            parse_zero_lines(['14.134725142', '25.010857580', '21.022039639'])
        self.assertEqual(ctx.exception.line, 3)

    def test_first_ordinate_floor(self):
        with self.assertRaises(ZeroFormatError):
            parse_zero_lines(['13.9', '21.022039639'])

    def test_unparsable_line(self):
        with self.assertRaises(ZeroFormatError) as ctx:
            parse_zero_lines(['14.134725142', 'twenty-one'])
        self.assertEqual(ctx.exception.line, 2)

    def test_complete_to_beyond_last_ordinate(self):
        with self.assertRaises(ZeroFormatError):
            parse_zero_lines(['# complete_to: 30', '14.134725142', '21.022039639', '25.010857580'])

    def test_comment_in_plain_format(self):
        with self.assertRaises(ZeroFormatError):
            parse_zero_lines(['# source: x', '14.134725142'], format='plain')

    def test_file_without_ordinates(self):
        with tempfile.TemporaryDirectory() as tmp:
            for name, body in (('empty.txt', ''), ('comments.txt', '# source: nowhere\n# accuracy: 1e-9\n')):
                path = Path(tmp) / name
                path.write_text(body, encoding='utf-8')
                with self.subTest(name=name), self.assertRaises(ZeroFormatError) as ctx:
                    load_zeros(path)
                self.assertIn('no ordinates', str(ctx.exception))

    def test_write_and_load(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_zero_file(Path(tmp) / 'zeros.txt', self.table.texts[:5], source='unit test',
                                   accuracy='1e-9', extra={'note': 'subset'})
            table = load_zeros(path)
            self.assertEqual(table.texts, self.table.texts[:5])
            self.assertEqual(table.source, 'unit test')
            self.assertEqual(table.claimed_complete_to, Fraction('32.935061588'))
            self.assertFalse(path.with_name('zeros.txt.part').exists())


class TailBoundTest(SimpleTestCase):
    def test_value_at_one_billion(self):
        value = tail_square_bound(10 ** 9).to_float()
        self.assertAlmostEqual(value / 3.165e-9, 1, places=3)

    def test_gate(self):
        with self.assertRaises(ArgumentError):
            tail_square_bound(10 ** 6)
        with self.assertLogs('oneline.zero_data', 'WARNING'):
            self.assertTrue(tail_square_bound(10 ** 6, allow_below_gate=True).is_positive())

    def test_envelope(self):
        for T in (10 ** 9, 3 * 10 ** 12):
            with self.subTest(T=T):
                self.assertTrue(tail_envelope_check(T).is_positive())


class ZeroSumTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.table = load_zeros(FIXTURE)

    def test_partial_sum_against_floats(self):
        T = self.table.claimed_complete_to
        value = partial_zero_sum(self.table, 1, 50, T)
        expected = math.fsum(
            0.5 / (0.25 + (50 - g) ** 2) + 0.5 / (0.25 + (50 + g) ** 2) for g in self.table.heights
        )
        self.assertAlmostEqual(value.to_float(), expected, places=7)

    def test_partial_sum_needs_coverage(self):
        with self.assertRaises(CoverageError):
            partial_zero_sum(self.table, 1, 50, 200)
        with self.assertRaises(ArgumentError):
            partial_zero_sum(self.table, '0.5', 50, 100)

    def test_proximity(self):
        with self.assertRaises(ProximityError):
            check_proximity(self.table, '14.1347')
        check_proximity(self.table, 20)

    def test_e_enclosure(self):
        lower, upper = e_enclosure(self.table, 35, 50)
        self.assertTrue((upper - lower).is_nonnegative())
        self.assertTrue(lower.is_positive())
        with self.assertRaises(CoverageError):
            e_enclosure(self.table, 150, 50)

    def test_split_condition(self):
        self.assertIsNone(e_split_check(self.table, 10, 20, '0.1'))
        with self.assertRaises(ArgumentError):
            e_split_check(self.table, 19, 20, '0.1')

    def test_digamma_step(self):
        for t in (100, 10 ** 6):
            with self.subTest(t=t):
                self.assertTrue(zero_sum_digamma_step(1, t).is_positive())

    def test_zero_sum_inequality(self):
        with self.assertRaises(ArgumentError):
            zero_sum_inequality_check(self.table, 1, 50, self.table.claimed_complete_to)
        with self.assertLogs('oneline.zero_data', 'WARNING'):
            margin = zero_sum_inequality_check(self.table, 1, 50, self.table.claimed_complete_to, relaxed=True)
        self.assertTrue(margin.is_nonnegative())

    def test_sum_below_the_first_ordinate_is_zero(self):
        value = partial_zero_sum(self.table, 1, 50, 10)
        self.assertTrue(value.is_exact())
        self.assertEqual(value.to_float(), 0)

    def test_single_ordinate_at_its_own_height(self):
        table = parse_zero_lines(['14.134725142'])
        gamma = Fraction('14.134725142')
        value = partial_zero_sum(table, 1, '14.134725142', '14.134725142')
        self.assertTrue(value.contains(2 + Fraction(1, 2) / (Fraction(1, 4) + 4 * gamma ** 2)))

    def test_inequality_with_no_ordinates_below_T(self):
        with self.assertLogs('oneline.zero_data', 'WARNING'):
            margin = zero_sum_inequality_check(self.table, 1, 50, 10, relaxed=True)
        s = mpmath.mpc(1, 50)
        expected = mpmath.re(mpmath.zeta(s, derivative=1) / mpmath.zeta(s)) + mpmath.log(50) / 2
        self.assertAlmostEqual(margin.to_float(), float(expected), places=8)

    def test_e_enclosure_past_the_table(self):
        lower, upper = e_enclosure(self.table, 50, 200)
        self.assertTrue(lower.contains(Fraction(0)))
        self.assertEqual(lower.to_float(), 0)
        self.assertTrue(upper.is_positive())

    def test_e_enclosure_at_zero_height(self):
        texts = self.table.texts[:3]
        table = parse_zero_lines(texts)
        lower, upper = e_enclosure(table, 0, '13.134725142')
        self.assertTrue(lower.contains(sum(2 / Fraction(g) ** 2 for g in texts)))
        with self.assertLogs('oneline.zero_data', 'WARNING'):
            tail = tail_square_bound(Fraction(texts[-1]), allow_below_gate=True)
        self.assertTrue((upper - lower).overlaps(2 * tail))

    def test_e_enclosure_tightens_with_more_ordinates(self):
        widths = []
        for count in (10, 20, 30):
            lower, upper = e_enclosure(self.table.truncated(count), 20, 30)
            widths.append((upper - lower).to_float())
        self.assertEqual(widths, sorted(widths, reverse=True))


class FloatZeroSumTest(SimpleTestCase):
    """Long ordinate ranges go through float64 sums with a certified error term"""
    HEIGHTS = (0, 20, '50.5', 100)

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.table = load_zeros(FIXTURE)

    def assertAgrees(self, fast, exact):
        self.assertTrue(fast.overlaps(exact))
        self.assertLess(to_float(fast.rad), 1e-8)

    def test_partial_sum(self):
        T = self.table.claimed_complete_to
        exact = {t: partial_zero_sum(self.table, 1, t, T) for t in self.HEIGHTS}
        with mock.patch.object(zero_data, 'BALL_TERMS', 3):
            for t in self.HEIGHTS:
                with self.subTest(t=t):
                    self.assertAgrees(partial_zero_sum(self.table, 1, t, T), exact[t])

    def test_e_enclosure(self):
        exact = {t: e_enclosure(self.table, t, 20) for t in self.HEIGHTS}
        with mock.patch.object(zero_data, 'BALL_TERMS', 3):
            for t in self.HEIGHTS:
                lower, upper = e_enclosure(self.table, t, 20)
                with self.subTest(t=t):
                    self.assertAgrees(lower, exact[t][0])
                    self.assertAgrees(upper, exact[t][1])

    def test_refuses_a_height_on_an_ordinate(self):
        t = ball_from_decimal('21.022039639')
        with mock.patch.object(zero_data, 'BALL_TERMS', 3):
            with self.assertRaises(ProximityError):
                zero_data._inverse_square_sum(self.table, t, 0, len(self.table), 128)
