from oneline.bounds import (
    QUANTITIES, BoundParams, comparison_bounds, compute_constants, general_alpha_bound, prime_cutoff,
    theorem_bounds,
)
from oneline.conf import setting
from oneline.prime_sums import cached_table

from ._base import WHICH, OnelineCommand


class Command(OnelineCommand):
    help = 'Evaluate the packaged bounds for zeta\'/zeta, 1/zeta, zeta and log zeta at 1 + it'

    def add_options(self, parser):
        parser.add_argument('--t', help='Height t (decimal)')
        parser.add_argument('--T', help='Height RH is verified to (default: 3e12)')
        parser.add_argument('--delta', help='Margin delta in (0, 1) (default: 1e-5)')
        parser.add_argument('--which', choices=sorted(WHICH) + ['all'], help='Bound to print (default: all)')
        parser.add_argument('--compare', action='store_true', default=None,
                            help='Also print the literature bounds with their validity windows')
        parser.add_argument('--limit', action='store_true', default=None,
                            help='Also print the bounds with E_delta(T) = 0')
        parser.add_argument('--alpha', help='Also print the general bound for |zeta\'/zeta(alpha + it)|, 1 <= alpha <= 3/2')
        parser.add_argument('--prec', type=int, help='Working precision in bits')

    def handle(self, *args, **options):
        t = self.option(options, 't', cast=str, required=True)
        prec = self.option(options, 'prec', setting('ONELINE_PREC'), cast=int)
        params = BoundParams.of(self.option(options, 'T', '3e12', cast=str),
                                self.option(options, 'delta', '1e-5', cast=str), prec)
        which = self.option(options, 'which', 'all')
        quantities = QUANTITIES if which == 'all' else (WHICH[which],)
        consts = compute_constants(prec)

        self.stdout.write(f'📐 Bounds at t = {t}, T = {float(params.T):g}, delta = {float(params.delta):g}')
        self.stdout.write(f'  E_delta(T)    = {params.e_delta.to_text(10)}')
        packaged = theorem_bounds(t, params, consts)
        limit = theorem_bounds(t, params, consts, limit=True) if self.option(options, 'limit') else None
        for quantity in quantities:
            line = f'  {quantity:<13} <= {packaged.bound_for(quantity).to_text(12)}'
            if limit is not None:
                line += f'   (limit {limit.bound_for(quantity).to_text(12)})'
            self.stdout.write(line)

        alpha = self.option(options, 'alpha', cast=str)
        if alpha is not None:
            primes = cached_table(max(prime_cutoff(t, prec), 2))
            value = general_alpha_bound(alpha, t, params, consts, primes)
            self.stdout.write(f'  |zeta\'/zeta({alpha} + it)| <= {value.to_text(12)}')

        if self.option(options, 'compare'):
            self.stdout.write('📚 Literature bounds')
            for item in comparison_bounds(t, prec):
                if item.quantity not in quantities:
                    continue
                value = item.value.to_text(10) if item.value is not None else 'n/a'
                flags = 'valid' if item.in_window else 'outside window'
                if item.conditional:
                    flags += ', assumes RH'
                self.stdout.write(f'  {item.name:<24} {item.quantity:<9} {value}  [{flags}]')
        self.stdout.write(self.style.SUCCESS('✅ Done'))
