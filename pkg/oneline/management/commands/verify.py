from oneline.balls import CERTIFIED_VIOLATION
from oneline.bounds import QUANTITIES
from oneline.conf import setting
from oneline.models import VerificationRun
from oneline.reports import FORMATS, emit_report
from oneline.scan import ScanConfig, run_scan, scan_summary
from oneline.zero_data import load_zeros

from ._base import WHICH, OnelineCommand


class Command(OnelineCommand):
    help = 'Check the four packaged bounds against certified enclosures on a grid of heights'

    def add_options(self, parser):
        parser.add_argument('--t-min', help='First height')
        parser.add_argument('--t-max', help='Last height')
        parser.add_argument('--steps', type=int, help='Number of grid points')
        parser.add_argument('--log', action='store_true', default=None, help='Log-spaced grid (default: linear)')
        parser.add_argument('--T', help='Height RH is verified to (default: 3e12)')
        parser.add_argument('--delta', help='Margin delta (default: 1e-5)')
        parser.add_argument('--zeros', help='Zero file; validated and recorded with the run')
        parser.add_argument('--which', action='append', choices=sorted(WHICH),
                            help='Restrict to a quantity (repeatable; default: all four)')
        parser.add_argument('--prec', type=int, help='Working precision in bits')
        parser.add_argument('--workers', type=int, help='Worker processes (default: ONELINE_WORKERS)')
        parser.add_argument('--relaxed', action='store_true', default=None,
                            help='Allow t < 1e6 as an observation')
        parser.add_argument('--out', help='Report file')
        parser.add_argument('--format', choices=FORMATS, help='Report format (default: csv)')
        parser.add_argument('--save', action='store_true', default=None, help='Store the run in the database')

    def handle(self, *args, **options):
        which = self.option(options, 'which')
        if isinstance(which, str):
            which = [which]
        zeros = self.option(options, 'zeros', cast=str)
        cfg = ScanConfig(
            t_min=self.option(options, 't_min', cast=str, required=True),
            t_max=self.option(options, 't_max', cast=str, required=True),
            steps=self.option(options, 'steps', cast=int, required=True),
            T=self.option(options, 'T', '3e12', cast=str),
            delta=self.option(options, 'delta', '1e-5', cast=str),
            spacing='log' if self.option(options, 'log') else 'linear',
            prec=self.option(options, 'prec', setting('ONELINE_PREC'), cast=int),
            zeros_path=zeros,
            quantities=tuple(dict.fromkeys(WHICH.get(w, w) for w in which)) if which else QUANTITIES,
            relaxed=bool(self.option(options, 'relaxed')),
            workers=self.option(options, 'workers', setting('ONELINE_WORKERS'), cast=int),
        )
        if zeros:
            table = load_zeros(zeros)
            self.stdout.write(f'📂 Zero table {zeros}: {len(table)} ordinates, complete to '
                              f'{float(table.claimed_complete_to):.9g}')
        if cfg.relaxed:
            self.stdout.write(self.style.WARNING('⚠️  Relaxed mode: results below 1e6 are observations only'))

        self.stdout.write(f'🔍 Verifying {len(cfg.quantities)} bounds at {cfg.steps} {cfg.spacing} points '
                          f'in [{cfg.t_min}, {cfg.t_max}], {cfg.prec} bits')
        records = run_scan(cfg)
        for record in records:
            if record.verdict == CERTIFIED_VIOLATION:
                self.stdout.write(self.style.ERROR(f'❌ {record.quantity} at t={record.t}: bound exceeded'))

        out = self.option(options, 'out', cast=str)
        if out:
            path = emit_report(records, out, self.option(options, 'format', 'csv'))
            self.stdout.write(f'📝 Report written to {path}')
        if self.option(options, 'save'):
            run = VerificationRun.from_config(cfg)
            run.save_records(records)
            self.stdout.write(f'💾 Saved run #{run.pk}')

        counts = scan_summary(records)
        self.finish(counts['certified_ok'], counts['undecided'], counts['certified_violation'], what='records')
