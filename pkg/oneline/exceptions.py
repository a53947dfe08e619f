"""
Exceptions raised by the toolkit.

Every error derives from VerificationError so scans can turn any failure
into an undecided record with a reason.
"""


class VerificationError(Exception):
    """Base class for toolkit errors"""


class ParseError(VerificationError, ValueError):
    """Malformed decimal numeral"""


class ArgumentError(VerificationError, ValueError):
    """Argument outside the domain of an operation"""


class DomainError(ArgumentError):
    """Ball argument meets a singularity or branch cut of an operation"""

    def __init__(self, operation, detail=''):
        self.operation = operation
        message = f"{operation}: argument ball is outside the domain"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class PoleError(DomainError):
    """Ball argument contains a pole"""


class UndecidedError(VerificationError):
    """Enclosures too wide to decide; more precision is needed"""

    def __init__(self, message, prec=None):
        self.prec = prec
        if prec is not None:
            message = f"{message}; increase precision beyond {prec} bits"
        super().__init__(message)


class CoverageError(VerificationError):
    """A table (sieve or zeros) does not reach far enough"""

    def __init__(self, message, required=None):
        self.required = required
        super().__init__(message)


class ConfigurationError(VerificationError):
    """Evaluation parameters that cannot give a finite certified result"""


class ZeroFormatError(VerificationError):
    """Invalid zero-table file"""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ProximityError(VerificationError):
    """Height too close to a zero ordinate"""


class AuditFailure(VerificationError):
    """A packaged constant failed to dominate its raw assembly"""

    def __init__(self, step, point, margin):
        self.step = step
        self.point = point
        self.margin = margin
        super().__init__(f"audit step '{step}' failed at {point}: margin {margin}")


class FetchError(VerificationError):
    """Base class for zero-table download failures"""


class NetworkError(FetchError):
    """Transport failure or non-success HTTP status"""

    def __init__(self, message, status=None):
        self.status = status
        super().__init__(message)


class ChecksumError(FetchError):
    """Downloaded payload does not match the expected SHA-256"""


class PayloadError(FetchError):
    """Downloaded payload is not a zero list"""
