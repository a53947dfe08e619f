from oneline.balls import CERTIFIED_OK, CERTIFIED_VIOLATION
from oneline.bounds import AUDIT_T_MAX, AUDIT_T_MIN, EXP_GRID, BoundParams, default_audit_grid, run_audit
from oneline.conf import setting
from oneline.exceptions import AuditFailure

from ._base import OnelineCommand

ICONS = {CERTIFIED_OK: '✅', CERTIFIED_VIOLATION: '❌'}


class Command(OnelineCommand):
    help = 'Audit every packaged constant against its raw assembly on a grid of heights'

    def add_options(self, parser):
        parser.add_argument('--T', help='Height RH is verified to (default: 3e12)')
        parser.add_argument('--delta', help='Margin delta (default: 1e-5)')
        parser.add_argument('--grid', type=int, help='Number of log-spaced heights (default: ONELINE_AUDIT_GRID)')
        parser.add_argument('--t-min', help='First grid height (default: 1e6)')
        parser.add_argument('--t-max', help='Last grid height (default: 1e12)')
        parser.add_argument('--exp-points', type=int, help='Grid size for the e^x check')
        parser.add_argument('--prec', type=int, help='Working precision in bits')

    def handle(self, *args, **options):
        prec = self.option(options, 'prec', setting('ONELINE_PREC'), cast=int)
        params = BoundParams.of(self.option(options, 'T', '3e12', cast=str),
                                self.option(options, 'delta', '1e-5', cast=str), prec)
        grid = default_audit_grid(
            self.option(options, 'grid', setting('ONELINE_AUDIT_GRID'), cast=int),
            self.option(options, 't_min', str(AUDIT_T_MIN), cast=str),
            self.option(options, 't_max', str(AUDIT_T_MAX), cast=str),
        )
        self.stdout.write(f'🧮 Auditing constants on {len(grid)} heights in [{grid[0]}, {grid[-1]}], {prec} bits')
        report = run_audit(params, grid, exp_points=self.option(options, 'exp_points', EXP_GRID, cast=int))

        for step in report.steps:
            icon = ICONS.get(step.verdict, '⚠️ ')
            margin = step.worst_margin.to_text(6) if step.worst_margin is not None else 'n/a'
            where = f' at {step.worst_point}' if step.worst_point else ''
            line = f'{icon} {step.step:<28} {step.description}\n     worst margin {margin}{where} ({step.checked} checks)'
            if step.verdict == CERTIFIED_OK:
                self.stdout.write(line)
            elif step.verdict == CERTIFIED_VIOLATION:
                self.stdout.write(self.style.ERROR(line))
            else:
                self.stdout.write(self.style.WARNING(line))

        for step in report.violations:
            raise AuditFailure(step.step, step.failing_point, step.worst_margin.to_text(6))
        ok = len(report.steps) - len(report.undecided)
        self.finish(ok, len(report.undecided), what='audit steps')
