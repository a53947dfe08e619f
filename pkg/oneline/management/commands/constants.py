from django.core.management.base import CommandError

from oneline.balls import pi
from oneline.bounds import compute_constants
from oneline.conf import setting
from oneline.oracles import machin_pi

from ._base import EXIT_VIOLATION, OnelineCommand


class Command(OnelineCommand):
    help = 'Print lambda0, A0, Euler gamma and log zeta(3/2) as certified balls'

    def add_options(self, parser):
        parser.add_argument('--prec', type=int, help='Working precision in bits (default: ONELINE_PREC)')
        parser.add_argument('--digits', type=int, help='Significant digits to print (default: 20)')

    def handle(self, *args, **options):
        prec = self.option(options, 'prec', setting('ONELINE_PREC'), cast=int)
        digits = self.option(options, 'digits', 20, cast=int)
        self.stdout.write(f'🔢 Constants at {prec} bits')
        consts = compute_constants(prec)
        for label, ball in (
            ('lambda0', consts.lambda0),
            ('A0', consts.A0),
            ('gamma', consts.euler_gamma),
            ('log zeta(3/2)', consts.log_zeta_32),
        ):
            self.stdout.write(f'  {label:<14} = {ball.to_text(digits)}')

        if not pi(prec).overlaps(machin_pi(prec)):
            raise CommandError('pi disagrees with the Machin series', returncode=EXIT_VIOLATION)
        if not consts.A0.overlaps(consts.lambda0.exp()):
            raise CommandError('A0 and exp(lambda0) do not overlap', returncode=EXIT_VIOLATION)
        self.stdout.write(self.style.SUCCESS('✅ pi cross-checked against the Machin series'))
