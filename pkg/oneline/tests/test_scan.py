from dataclasses import replace
from fractions import Fraction
from unittest import mock

from django.test import SimpleTestCase
from joblib import Parallel

from oneline.balls import CERTIFIED_OK, CERTIFIED_VIOLATION, UNDECIDED, BallComplex, ball_from_decimal, ball_from_int
from oneline.bounds import BoundParams, theorem_bounds
from oneline.exceptions import ArgumentError
from oneline.scan import ScanConfig, VerificationRecord, run_scan, scan_summary
from oneline.zeta_eval import EvalConfig, zeta_with_derivative

HYPOTHESES = {'T': '3e12', 'delta': '1e-5'}


class ScanConfigTest(SimpleTestCase):
    def test_linear_grid(self):
        cfg = ScanConfig('1e6', '2e6', 3, **HYPOTHESES)
        self.assertEqual(cfg.grid(), [Fraction(10 ** 6), Fraction(15 * 10 ** 5), Fraction(2 * 10 ** 6)])

    def test_log_grid_endpoints(self):
        grid = ScanConfig('1e6', '1e8', 5, spacing='log', **HYPOTHESES).grid()
        self.assertEqual(len(grid), 5)
        self.assertEqual((grid[0], grid[-1]), (Fraction(10 ** 6), Fraction(10 ** 8)))
        self.assertEqual(grid[2], Fraction(10 ** 7))

    def test_validation(self):
        cases = [
            dict(t_min='1e5', t_max='1e6', steps=2),
            dict(t_min='1e6', t_max='3e12', steps=2),
            dict(t_min='2e6', t_max='1e6', steps=2),
            dict(t_min='1e6', t_max='2e6', steps=0),
            dict(t_min='1e6', t_max='2e6', steps=2, spacing='cubic'),
            dict(t_min='1e6', t_max='2e6', steps=2, quantities=('zeta', 'gamma')),
        ]
        for case in cases:
            with self.subTest(**{k: str(v) for k, v in case.items()}):
                with self.assertRaises(ArgumentError):
                    ScanConfig(**case, **HYPOTHESES)

    def test_relaxed_allows_small_heights(self):
        self.assertEqual(ScanConfig('100', '200', 2, relaxed=True, **HYPOTHESES).grid()[-1], 200)


class VerificationRecordTest(SimpleTestCase):
    def test_compare(self):
        record = VerificationRecord.compare('1000000', 'zeta', ball_from_decimal('2.5'), ball_from_decimal('34.6'))
        self.assertEqual(record.verdict, CERTIFIED_OK)
        self.assertTrue(record.margin.contains(Fraction(321, 10)))
        flipped = VerificationRecord.compare('1000000', 'zeta', ball_from_decimal('40'), ball_from_decimal('34.6'))
        self.assertEqual(flipped.verdict, CERTIFIED_VIOLATION)

    def test_summary(self):
        records = [
            VerificationRecord.compare('1', 'zeta', ball_from_decimal('1'), ball_from_decimal('2')),
            VerificationRecord.undecided('1', 'log_zeta', 'too wide'),
        ]
        self.assertEqual(scan_summary(records), {CERTIFIED_OK: 1, CERTIFIED_VIOLATION: 0, UNDECIDED: 1})


class RunScanTest(SimpleTestCase):
    def test_single_point_matches_direct_evaluation(self):
        cfg = ScanConfig('1e6', '1e6', 1, quantities=('zeta', 'inv_zeta', 'logderiv'), **HYPOTHESES)
        records = run_scan(cfg)
        self.assertEqual([r.quantity for r in records], ['zeta', 'inv_zeta', 'logderiv'])
        packaged = theorem_bounds(10 ** 6, BoundParams.of('3e12', '1e-5'))
        value, derivative = zeta_with_derivative(BallComplex(ball_from_int(1), ball_from_int(10 ** 6)))
        expected = {'zeta': abs(value), 'inv_zeta': 1 / abs(value), 'logderiv': abs(derivative / value)}
        for record in records:
            with self.subTest(quantity=record.quantity):
                self.assertEqual(record.t, '1000000')
                self.assertEqual(record.verdict, CERTIFIED_OK)
                self.assertEqual(record.bound, packaged.bound_for(record.quantity))
                self.assertTrue(record.computed.overlaps(expected[record.quantity]))

    def test_relaxed_scan_is_deterministic(self):
        cfg = ScanConfig('100', '130', 4, quantities=('zeta', 'logderiv'), relaxed=True, **HYPOTHESES)
        with self.assertLogs('oneline.scan', 'WARNING'):
            first = run_scan(cfg)
        second = run_scan(cfg)
        self.assertEqual(first, second)
        self.assertEqual([r.t for r in first[::2]], ['100', '110', '120', '130'])
        self.assertNotIn(CERTIFIED_VIOLATION, {r.verdict for r in first})

    def test_errors_become_undecided_records(self):
        cfg = ScanConfig('200', '200', 1, quantities=('zeta', 'log_zeta'), relaxed=True, **HYPOTHESES)
        with self.assertLogs('oneline.scan', 'WARNING') as logs:
            records = run_scan(cfg, eval_cfg=EvalConfig(t_ceiling=150))
        self.assertEqual([r.verdict for r in records], [UNDECIDED, UNDECIDED])
        self.assertIn('ceiling', records[0].reason)
        self.assertIsNotNone(records[0].bound)
        self.assertTrue(any('Undecided zeta' in line for line in logs.output))

    def test_low_precision_never_crashes(self):
        cfg = ScanConfig('100', '120', 2, quantities=('zeta', 'inv_zeta'), relaxed=True, prec=16, **HYPOTHESES)
        records = run_scan(cfg, eval_cfg=EvalConfig(prec=16))
        self.assertEqual(len(records), 4)
        self.assertNotIn(CERTIFIED_VIOLATION, {r.verdict for r in records})

    def test_unexpected_errors_become_failed_records(self):
        cfg = ScanConfig('1e6', '1e6', 1, quantities=('zeta', 'logderiv'), **HYPOTHESES)
        with mock.patch('oneline.scan.zeta_with_derivative', side_effect=ZeroDivisionError('division by zero')):
            with self.assertLogs('oneline.scan', 'ERROR') as logs:
                records = run_scan(cfg)
        self.assertEqual([r.verdict for r in records], [UNDECIDED, UNDECIDED])
        self.assertTrue(records[0].reason.startswith('failed: ZeroDivisionError'))
        self.assertIsNotNone(records[0].bound)
        self.assertIn('Evaluating zeta at t=1000000 failed', logs.output[0])

    def test_workers_do_not_change_the_records(self):
        cfg = ScanConfig('100', '130', 4, quantities=('zeta', 'inv_zeta'), relaxed=True, **HYPOTHESES)
        serial = run_scan(cfg)
        with mock.patch('oneline.scan.Parallel', wraps=Parallel) as pool:
            parallel = run_scan(replace(cfg, workers=2))
        pool.assert_called_once_with(n_jobs=2)
        self.assertEqual(parallel, serial)
