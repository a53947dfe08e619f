from fractions import Fraction
from pathlib import Path
from unittest import mock

from django.test import SimpleTestCase

from oneline.balls import BallComplex, ball_from_int
from oneline.exceptions import ArgumentError, CoverageError, ProximityError
from oneline.explicit_formula import (
    FormulaParams, FormulaSides, formula_sides, instantiate, instantiation_identities, pole_term, prime_limit,
    residual_check, small_term_checks, trivial_term, weight_w, zero_term,
)
from oneline.prime_sums import sieve_mangoldt
from oneline.zero_data import load_zeros

FIXTURE = Path(__file__).parent / 'fixtures' / 'zeros_first30.txt'


class WeightTest(SimpleTestCase):
    def setUp(self):
        self.params = FormulaParams.of(10, 100, 1, 50)

    def test_plateau_below_x(self):
        for n in (2, 7, 10):
            with self.subTest(n=n):
                self.assertTrue(weight_w(n, self.params).contains(1))

    def test_decay_to_zero(self):
        self.assertTrue(weight_w(1000, self.params).contains(0))
        self.assertTrue(weight_w(100, self.params).contains(Fraction(1, 2)))

    def test_bounded_by_one(self):
        for n in range(2, 1001, 37):
            weight = weight_w(n, self.params)
            with self.subTest(n=n):
                self.assertTrue(weight.is_nonnegative())
                self.assertTrue((1 - weight).is_nonnegative())

    def test_outside_support(self):
        for n in (1, 1001):
            with self.subTest(n=n):
                with self.assertRaises(ArgumentError):
                    weight_w(n, self.params)

    def test_parameter_ranges(self):
        with self.assertRaises(ArgumentError):
            FormulaParams.of('1.5', 2, 1, 10)
        with self.assertRaises(ArgumentError):
            FormulaParams.of(2, 2, 2, 10)

    def test_prime_limit(self):
        self.assertEqual(prime_limit(self.params), 1000)


class InstantiationTest(SimpleTestCase):
    def test_choice_of_y(self):
        params = instantiate(1, 10 ** 6)
        self.assertAlmostEqual(params.y.to_float(), 12.9, places=1)
        self.assertGreater(params.x.to_float(), 2)

    def test_clipped_x(self):
        self.assertTrue(instantiate(1, 100).x.contains(2))

    def test_identities(self):
        for alpha in ('1', '1.25'):
            with self.subTest(alpha=alpha):
                ids = instantiation_identities(alpha, 10 ** 6)
                self.assertTrue(ids.zero_coefficient.overlaps(ids.zero_coefficient_closed))
                self.assertTrue(ids.tail_coefficient.overlaps(ids.tail_coefficient_bound)
                                or (ids.tail_coefficient_bound - ids.tail_coefficient).is_nonnegative())
        strict = instantiation_identities('1.25', 10 ** 6)
        self.assertTrue((strict.tail_coefficient_bound - strict.tail_coefficient).is_positive())

    def test_identities_need_unclipped_x(self):
        with self.assertRaises(ArgumentError):
            instantiation_identities(1, 100)


class SmallTermsTest(SimpleTestCase):
    def test_trivial_and_pole_bounds(self):
        for t in (10, 1000, 10 ** 6):
            params = instantiate(1, t)
            zero = BallComplex.from_real(0)
            sides = FormulaSides(zero, zero, trivial_term(params), pole_term(params), zero,
                                 ball_from_int(0), 0)
            margins = small_term_checks(sides, t)
            for name, margin in margins.items():
                with self.subTest(t=t, term=name):
                    self.assertTrue(margin.is_positive())


class ResidualTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.table = load_zeros(FIXTURE)
        cls.primes = sieve_mangoldt(1000)

    def test_small_parameters(self):
        params = FormulaParams.of(2, 2, 1, 10)
        sides = formula_sides(params, self.table, self.primes)
        self.assertEqual(sides.zeros_used, 30)
        margin = residual_check(params, self.table, self.primes, strict=False, sides=sides)
        self.assertTrue(margin.is_positive())
        self.assertTrue(sides.residual.is_nonnegative())

    def test_instantiated_parameters(self):
        params = instantiate(1, 50)
        margin = residual_check(params, self.table, self.primes, strict=False)
        self.assertTrue(margin.is_positive())

    def test_prime_table_too_short(self):
        with self.assertRaises(CoverageError):
            formula_sides(instantiate(1, 50), self.table, sieve_mangoldt(10))

    def test_near_a_zero(self):
        with self.assertRaises(ProximityError):
            formula_sides(FormulaParams.of(2, 2, 1, '14.1347'), self.table, self.primes)

    def test_low_height(self):
        with self.assertRaises(ArgumentError):
            formula_sides(FormulaParams.of(2, 2, 1, 9), self.table, self.primes)

    def test_parallel_zero_sum_matches_serial(self):
        params = FormulaParams.of(2, 3, 1, 20)
        with mock.patch('oneline.explicit_formula.ZERO_CHUNK', 7):
            serial, count = zero_term(params, self.table)
            parallel, _ = zero_term(params, self.table, workers=2)
        self.assertEqual(count, 30)
        self.assertEqual(serial, parallel)
