from math import floor

from oneline.balls import CERTIFIED_OK, CERTIFIED_VIOLATION, as_fraction, certified_sign
from oneline.conf import setting
from oneline.prime_sums import (
    REFERENCE_BOUNDS, euler_product_check, reference_bound, reference_grid_check, reference_inequality_check,
    sieve_mangoldt,
)

from ._base import OnelineCommand, UsageParser


class Command(OnelineCommand):
    help = 'Check the prime-sum inequalities against the sieved von Mangoldt sums'

    def add_options(self, parser):
        actions = parser.add_subparsers(dest='action', required=True, parser_class=UsageParser)
        check = actions.add_parser('check', help='Reference inequality at x, or on the grid 10^(k/2) up to x')
        check.add_argument('--x', help='Cutoff x (with --grid: largest grid point; default ONELINE_SIEVE_LIMIT)')
        check.add_argument('--which', choices=REFERENCE_BOUNDS, help='Inequality (default: ramare)')
        check.add_argument('--grid', action='store_true', default=None, help='Check the whole log grid up to x')
        check.add_argument('--euler', action='store_true', default=None,
                           help='Also compare the sum with the Euler product at x')
        check.add_argument('--prec', type=int, help='Working precision in bits')

    def handle(self, *args, **options):
        prec = self.option(options, 'prec', setting('ONELINE_PREC'), cast=int)
        which = self.option(options, 'which', 'ramare', cast=str)
        grid = self.option(options, 'grid')
        x = self.option(options, 'x', str(setting('ONELINE_SIEVE_LIMIT')) if grid else None, cast=str,
                        required=True)
        table = sieve_mangoldt(max(floor(as_fraction(x)), 2))

        if grid:
            rows = reference_grid_check(table, x, which, prec)
        else:
            margin = reference_inequality_check(table, x, which, prec)
            rows = [(x, margin, certified_sign(margin))]
        self.stdout.write(f'🔢 {which} inequality, {len(table)} prime powers up to {table.limit}')
        counts = {CERTIFIED_OK: 0, CERTIFIED_VIOLATION: 0}
        undecided = 0
        for point, margin, verdict in rows:
            line = f'  x = {point:<18} bound {reference_bound(point, which, prec).to_text(12)}  margin {margin.to_text(6)}'
            if verdict in counts:
                counts[verdict] += 1
            else:
                undecided += 1
            if verdict == CERTIFIED_VIOLATION:
                self.stdout.write(self.style.ERROR(line))
            else:
                self.stdout.write(line)

        if self.option(options, 'euler'):
            left, right = euler_product_check(table, x, prec)
            if left.overlaps(right):
                counts[CERTIFIED_OK] += 1
                self.stdout.write(f'✅ Euler product at x = {x}: {left.to_text(15)} overlaps {right.to_text(15)}')
            else:
                counts[CERTIFIED_VIOLATION] += 1
                self.stdout.write(self.style.ERROR(f'❌ Euler product at x = {x}: {left.to_text(15)} vs {right.to_text(15)}'))
        self.finish(counts[CERTIFIED_OK], undecided, counts[CERTIFIED_VIOLATION], what='prime-sum checks')
