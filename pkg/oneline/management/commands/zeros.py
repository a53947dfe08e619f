import numpy as np

from oneline.zero_data import generate_zeros, load_zeros, rvm_grid, rvm_residuals, rvm_slack
from oneline.zero_fetch import fetch_zeros

from ._base import OnelineCommand, UsageParser


class Command(OnelineCommand):
    help = 'Inspect, download or generate tables of zeta zero ordinates'

    def add_options(self, parser):
        actions = parser.add_subparsers(dest='action', required=True, parser_class=UsageParser)

        stats = actions.add_parser('stats', help='Count, largest ordinate and Riemann-von Mangoldt residuals')
        stats.add_argument('--file', help='Zero file')

        fetch = actions.add_parser('fetch', help='Download a published zero list')
        fetch.add_argument('--url', help='HTTP(S) location of a plain-text or gzip list')
        fetch.add_argument('--out', help='Destination zero file')
        fetch.add_argument('--sha256', help='Expected SHA-256 of the payload')

        generate = actions.add_parser('generate', help='Write the first N ordinates computed by mpmath')
        generate.add_argument('--count', type=int, help='Number of ordinates')
        generate.add_argument('--out', help='Destination zero file')
        generate.add_argument('--dps', type=int, help='Decimal digits of working precision (default: 25)')

    def handle(self, *args, **options):
        action = options['action']
        if action == 'stats':
            self.stats(options)
        elif action == 'fetch':
            self.fetch(options)
        else:
            self.generate(options)

    def stats(self, options):
        path = self.option(options, 'file', cast=str, required=True)
        table = load_zeros(path)
        grid = rvm_grid(table)
        residuals = rvm_residuals(table, grid)
        worst = int(np.argmax(np.abs(residuals)))
        self.stdout.write(f'📂 {path}')
        self.stdout.write(f'  ordinates     {len(table)}')
        self.stdout.write(f'  gamma_max     {table.texts[-1]}')
        self.stdout.write(f'  complete_to   {float(table.claimed_complete_to):.12g}')
        self.stdout.write(f'  accuracy      {float(table.accuracy):g}')
        if table.source:
            self.stdout.write(f'  source        {table.source}')
        self.stdout.write(f'📊 N(H) - main term on {len(grid)} heights: '
                          f'mean {residuals.mean():+.3f}, worst {residuals[worst]:+.3f} at H={grid[worst]:.6g} '
                          f'(allowed {rvm_slack(grid[worst]):.3f})')
        self.stdout.write(self.style.SUCCESS('✅ Table passes the sanity checks'))

    def fetch(self, options):
        url = self.option(options, 'url', cast=str, required=True)
        out = self.option(options, 'out', cast=str, required=True)
        path = fetch_zeros(url, out, self.option(options, 'sha256', cast=str))
        self.stdout.write(self.style.SUCCESS(f'✅ Saved zeros from {url} to {path}'))

    def generate(self, options):
        count = self.option(options, 'count', cast=int, required=True)
        out = self.option(options, 'out', cast=str, required=True)
        self.stdout.write(f'🔢 Computing {count} ordinates with mpmath...')
        path = generate_zeros(count, out, self.option(options, 'dps', 25, cast=int))
        self.stdout.write(self.style.SUCCESS(f'✅ Wrote {count} ordinates to {path}'))
