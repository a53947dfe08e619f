from oneline.balls import CERTIFIED_OK, CERTIFIED_VIOLATION, certified_sign
from oneline.bounds import compute_constants
from oneline.conf import setting
from oneline.explicit_formula import (
    FormulaParams, formula_sides, instantiate, prime_limit, residual_check, small_term_checks,
)
from oneline.prime_sums import cached_table
from oneline.zero_data import load_zeros
from oneline.zeta_eval import EvalConfig

from ._base import OnelineCommand


class Command(OnelineCommand):
    help = 'Evaluate both sides of the explicit formula for zeta\'/zeta term by term'

    def add_options(self, parser):
        parser.add_argument('--t', help='Height t')
        parser.add_argument('--alpha', help='Real part of s, 1 <= alpha <= 3/2 (default: 1)')
        parser.add_argument('--x', help='Parameter x >= 2 (default: from lambda0)')
        parser.add_argument('--y', help='Parameter y >= 2 (default: from lambda0)')
        parser.add_argument('--zeros', help='Zero file')
        parser.add_argument('--prec', type=int, help='Working precision in bits')
        parser.add_argument('--workers', type=int, help='Worker processes for the zero sum')

    def handle(self, *args, **options):
        prec = self.option(options, 'prec', setting('ONELINE_PREC'), cast=int)
        t = self.option(options, 't', cast=str, required=True)
        alpha = self.option(options, 'alpha', '1', cast=str)
        x, y = self.option(options, 'x', cast=str), self.option(options, 'y', cast=str)
        table = load_zeros(self.option(options, 'zeros', cast=str, required=True))
        workers = self.option(options, 'workers', setting('ONELINE_WORKERS'), cast=int)

        if x is not None and y is not None:
            params = FormulaParams.of(x, y, alpha, t, prec)
        else:
            params = instantiate(alpha, t, compute_constants(prec), prec)
        primes = cached_table(max(prime_limit(params), 2))
        cfg = EvalConfig.from_settings(prec=prec)

        self.stdout.write(f'📐 s = {alpha} + {t}i, x = {params.x.to_text(10)}, y = {params.y.to_text(10)}')
        sides = formula_sides(params, table, primes, cfg, workers)
        for label, value in (
            ("zeta'/zeta(s)", sides.lhs),
            ('zero sum', sides.zero_term),
            ('trivial zeros', sides.trivial_term),
            ('pole', sides.pole_term),
            ('prime sum', sides.prime_term),
            ('right side', sides.rhs),
        ):
            self.stdout.write(f'  {label:<14} {value.to_text(12)}')
        self.stdout.write(f'  zeros used     {sides.zeros_used} (complete to {float(table.claimed_complete_to):.9g})')
        self.stdout.write(f'  |lhs - rhs|    {sides.residual.to_text(6)}')
        self.stdout.write(f'  tail budget    {sides.zero_tail_budget.to_text(6)}')

        counts = {CERTIFIED_OK: 0, CERTIFIED_VIOLATION: 0}
        undecided = 0
        margins = {'residual': residual_check(params, table, primes, cfg, workers, strict=False, sides=sides)}
        margins.update(small_term_checks(sides, t, prec))
        for name, margin in margins.items():
            verdict = certified_sign(margin)
            line = f'  {name:<10} margin {margin.to_text(6)}: {verdict}'
            if verdict in counts:
                counts[verdict] += 1
            else:
                undecided += 1
            self.stdout.write(self.style.ERROR(line) if verdict == CERTIFIED_VIOLATION else line)
        self.finish(counts[CERTIFIED_OK], undecided, counts[CERTIFIED_VIOLATION], what='formula checks')
