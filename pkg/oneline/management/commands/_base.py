"""
Shared plumbing for the oneline management commands.

Option values come from, in order: the command line, the JSON file given by
--config (same keys as the flags, hyphens or underscores), Django settings,
built-in defaults. Toolkit errors become CommandError with the exit codes
below.
"""

import json
import sys
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError, CommandParser

from oneline.exceptions import (
    ArgumentError, AuditFailure, ConfigurationError, CoverageError, FetchError, ParseError,
    UndecidedError, VerificationError, ZeroFormatError,
)

EXIT_OK = 0
EXIT_UNDECIDED = 2
EXIT_VIOLATION = 3
EXIT_USAGE = 64

USAGE_ERRORS = (ArgumentError, ConfigurationError, CoverageError, ParseError, ZeroFormatError)

# --which spellings
WHICH = {
    'logderiv': 'logderiv',
    'invzeta': 'inv_zeta',
    'inv_zeta': 'inv_zeta',
    'zeta': 'zeta',
    'logzeta': 'log_zeta',
    'log_zeta': 'log_zeta',
}


class UsageParser(CommandParser):
    """Argument errors exit with EXIT_USAGE instead of argparse's 2"""

    def error(self, message):
        if self.called_from_command_line:
            self.print_usage(sys.stderr)
            self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")
        raise CommandError(f"Error: {message}", returncode=EXIT_USAGE)


def read_config(path):
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding='utf-8'))
    except OSError as exc:
        raise CommandError(f"cannot read config file {path}: {exc}", returncode=EXIT_USAGE) from exc
    except json.JSONDecodeError as exc:
        raise CommandError(f"config file {path} is not valid JSON: {exc}", returncode=EXIT_USAGE) from exc
    if not isinstance(data, dict):
        raise CommandError(f"config file {path} must hold a JSON object", returncode=EXIT_USAGE)
    return {key.replace('-', '_'): value for key, value in data.items()}


class OnelineCommand(BaseCommand):
    """Base for the toolkit commands: --config, option precedence and exit codes"""

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # argument errors exit with EXIT_USAGE; subparsers pass parser_class=UsageParser
        parser.__class__ = UsageParser
        return parser

    def add_arguments(self, parser):
        parser.add_argument('--config', help='JSON file with option values; flags take precedence')
        self.add_options(parser)

    def add_options(self, parser):
        pass

    def execute(self, *args, **options):
        self.config = read_config(options.get('config'))
        try:
            return super().execute(*args, **options)
        except AuditFailure as exc:
            raise CommandError(str(exc), returncode=EXIT_VIOLATION) from exc
        except USAGE_ERRORS as exc:
            raise CommandError(str(exc), returncode=EXIT_USAGE) from exc
        except FetchError as exc:
            raise CommandError(f"{type(exc).__name__}: {exc}", returncode=1) from exc
        except UndecidedError as exc:
            raise CommandError(str(exc), returncode=EXIT_UNDECIDED) from exc
        except VerificationError as exc:
            raise CommandError(str(exc), returncode=1) from exc

    def option(self, options, name, fallback=None, cast=None, required=False):
        """Flag value, else the config file's, else fallback"""
        value = options.get(name)
        if value is None:
            value = self.config.get(name)
        if value is None:
            value = fallback
        if value is None and required:
            flag = '--' + name.replace('_', '-')
            raise CommandError(f"Error: {flag} is required (on the command line or in --config)",
                               returncode=EXIT_USAGE)
        if value is not None and cast is not None:
            try:
                value = cast(value)
            except (TypeError, ValueError) as exc:
                raise CommandError(f"Error: bad value for {name}: {value!r}", returncode=EXIT_USAGE) from exc
        return value

    def finish(self, ok=0, undecided=0, violations=0, what='checks'):
        """Summary line and the matching exit code"""
        self.stdout.write('=' * 50)
        self.stdout.write(f'✅ Certified: {ok}')
        if undecided:
            self.stdout.write(self.style.WARNING(f'⚠️  Undecided: {undecided}'))
        if violations:
            self.stdout.write(self.style.ERROR(f'❌ Violations: {violations}'))
        self.stdout.write('=' * 50)
        if violations:
            raise CommandError(f"{violations} {what} certified as violated", returncode=EXIT_VIOLATION)
        if undecided:
            raise CommandError(f"{undecided} {what} undecided; increase --prec", returncode=EXIT_UNDECIDED)
        self.stdout.write(self.style.SUCCESS(f'🎉 All {what} certified'))
