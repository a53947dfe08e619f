import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from oneline.models import VerificationRun
from oneline.reports import parse_csv
from oneline.zero_data import load_zeros

FIXTURE = Path(__file__).parent / 'fixtures' / 'zeros_first30.txt'


def run(*args, **options):
    out = StringIO()
    call_command(*args, stdout=out, **options)
    return out.getvalue()


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def assertExitCode(self, code, *args):
        with self.assertRaises(CommandError) as ctx:
            run(*args)
        self.assertEqual(ctx.exception.returncode, code)
        return ctx.exception


class ConstantsCommandTest(CommandTestCase):
    def test_prints_the_constants(self):
        output = run('constants', '--prec', '128')
        self.assertIn('lambda0', output)
        self.assertIn('1.2784645427610', output)
        self.assertIn('Machin', output)


class BoundsCommandTest(CommandTestCase):
    def test_bounds_at_one_million(self):
        output = run('bounds', '--t', '1e6', '--compare', '--limit', '--alpha', '1.25')
        self.assertIn('logderiv', output)
        self.assertIn('8.82', output)
        self.assertIn('patel_zeta', output)
        self.assertIn('assumes RH', output)
        self.assertIn("|zeta'/zeta(1.25 + it)|", output)

    def test_which(self):
        output = run('bounds', '--t', '1e6', '--which', 'invzeta')
        self.assertIn('inv_zeta', output)
        self.assertNotIn('logderiv', output)

    def test_missing_height(self):
        self.assertExitCode(64, 'bounds')

    def test_out_of_range(self):
        self.assertExitCode(64, 'bounds', '--t', '1e5')

    def test_unknown_flag(self):
        self.assertExitCode(64, 'bounds', '--t', '1e6', '--bogus')

    def test_config_file(self):
        config = self.dir / 'config.json'
        config.write_text(json.dumps({'t': '1e6', 'which': 'logderiv', 'T': '1e10'}))
        output = run('bounds', '--config', str(config))
        self.assertIn('T = 1e+10', output)
        output = run('bounds', '--config', str(config), '--T', '3e12')
        self.assertIn('T = 3e+12', output)

    def test_bad_config_file(self):
        config = self.dir / 'config.json'
        config.write_text('[1, 2]')
        self.assertExitCode(64, 'bounds', '--config', str(config))


class AuditCommandTest(CommandTestCase):
    def test_small_audit(self):
        output = run('audit', '--grid', '3', '--exp-points', '100')
        self.assertIn('exp_quadratic_grid', output)
        self.assertIn('All audit steps certified', output)


class PrimesCommandTest(CommandTestCase):
    def test_single_point(self):
        output = run('primes', 'check', '--x', '1000', '--which', 'rosser', '--euler')
        self.assertIn('rosser inequality', output)
        self.assertIn('Euler product', output)

    def test_grid(self):
        output = run('primes', 'check', '--x', '1e4', '--grid')
        self.assertIn('All prime-sum checks certified', output)


class ZerosCommandTest(CommandTestCase):
    def test_stats(self):
        output = run('zeros', 'stats', '--file', str(FIXTURE))
        self.assertIn('30', output)
        self.assertIn('101.317851006', output)

    def test_generate(self):
        out = self.dir / 'generated.txt'
        run('zeros', 'generate', '--count', '3', '--out', str(out))
        table = load_zeros(out)
        self.assertEqual(len(table), 3)
        self.assertTrue(table.texts[0].startswith('14.1347251417'))

    def test_bad_file(self):
        bad = self.dir / 'bad.txt'
        bad.write_text('21.0\n14.5\n')
        self.assertExitCode(64, 'zeros', 'stats', '--file', str(bad))

    def test_unreachable_url(self):
        error = self.assertExitCode(1, 'zeros', 'fetch', '--url', 'http://127.0.0.1:9/zeros.txt',
                                    '--out', str(self.dir / 'zeros.txt'))
        self.assertIn('NetworkError', str(error))


class ExplicitFormulaCommandTest(CommandTestCase):
    def test_small_parameters(self):
        output = run('explicit_formula', '--t', '10', '--x', '2', '--y', '2', '--zeros', str(FIXTURE))
        self.assertIn('tail budget', output)
        self.assertIn('All formula checks certified', output)

    def test_near_a_zero(self):
        self.assertExitCode(1, 'explicit_formula', '--t', '14.1347', '--x', '2', '--y', '2', '--zeros', str(FIXTURE))


class VerifyCommandTest(CommandTestCase):
    def test_relaxed_scan_report(self):
        out = self.dir / 'scan.csv'
        output = run('verify', '--t-min', '100', '--t-max', '110', '--steps', '2', '--which', 'zeta',
                     '--relaxed', '--zeros', str(FIXTURE), '--out', str(out))
        self.assertIn('Relaxed mode', output)
        records = parse_csv(out)
        self.assertEqual([(r.t, r.quantity) for r in records], [('100', 'zeta'), ('110', 'zeta')])

    def test_below_range_without_relaxed(self):
        self.assertExitCode(64, 'verify', '--t-min', '100', '--t-max', '110', '--steps', '2')

    def test_low_precision_is_undecided_or_certified(self):
        try:
            run('verify', '--t-min', '1e6', '--t-max', '1e6', '--steps', '1', '--which', 'zeta', '--prec', '16')
        except CommandError as exc:
            self.assertEqual(exc.returncode, 2)


class SavedRunTest(TestCase):
    def test_save(self):
        run('verify', '--t-min', '100', '--t-max', '120', '--steps', '3', '--which', 'zeta', '--which', 'logderiv',
            '--relaxed', '--save')
        saved = VerificationRun.objects.get()
        self.assertTrue(saved.relaxed)
        self.assertEqual(saved.outcomes.count(), 6)
        self.assertEqual(list(saved.outcomes.values_list('quantity', flat=True)[:2]), ['zeta', 'logderiv'])
