"""
Midpoint-radius (ball) arithmetic on top of mpmath's raw binary floats.

A BallReal is the set [mid - rad, mid + rad]. Every operation returns a
ball containing the exact image of its inputs: add, sub, mul and div use
the midpoint-radius formulas with directed rounding of the midpoint, the
transcendental functions go through mpmath's outward-rounded interval
kernels and come back to midpoint-radius form. A BallComplex is a
rectangle of two real balls.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from mpmath.libmp import (
    fzero, finf, fninf, fnan,
    round_nearest, round_floor, round_ceiling, round_up,
    from_int, from_float, from_rational, from_man_exp, from_str, to_str, to_float,
    mpf_add, mpf_sub, mpf_mul, mpf_div, mpf_abs, mpf_neg, mpf_shift,
    mpf_sign, mpf_lt, mpf_le, mpf_gt, mpf_ge, mpf_floor, mpf_ceil,
    mpf_pi, mpf_euler, repr_dps, to_int,
    mpi_exp, mpi_log, mpi_sqrt, mpi_atan, mpi_atan2, mpi_cos_sin, mpi_pow_int,
)
from mpmath.libmp.libmpi import mpi_square

from .exceptions import ArgumentError, DomainError, ParseError

DEFAULT_PREC = 128

# Radii carry few bits and are always rounded up.
RAD_PREC = 30

GUARD_BITS = 8

CERTIFIED_OK = 'certified_ok'
CERTIFIED_VIOLATION = 'certified_violation'
UNDECIDED = 'undecided'

VERDICT_CHOICES = [
    (CERTIFIED_OK, 'Certified OK'),
    (CERTIFIED_VIOLATION, 'Certified violation'),
    (UNDECIDED, 'Undecided'),
]

DECIMAL_RE = re.compile(r'^([+-]?)(\d+)?(?:\.(\d*))?(?:[eE]([+-]?\d+))?$')

MAX_DECIMAL_EXPONENT = 100_000


def _radd(*values):
    total = fzero
    for value in values:
        total = mpf_add(total, value, RAD_PREC, round_up)
    return total


def _rmul(a, b):
    return mpf_mul(a, b, RAD_PREC, round_up)


def _rmax(a, b):
    return a if mpf_ge(a, b) else b


def _rounded(exact_lo, exact_hi):
    """Midpoint and rounding radius for a value known to lie in [lo, hi]"""
    if exact_lo == exact_hi:
        return exact_lo, fzero
    return exact_lo, mpf_sub(exact_hi, exact_lo, RAD_PREC, round_up)


def _finite(value):
    return value not in (finf, fninf, fnan)


def _as_mpf(value):
    if isinstance(value, tuple):
        return value
    if isinstance(value, int):
        return from_int(value)
    if isinstance(value, float):
        return from_float(value)
    if hasattr(value, '_mpf_'):
        return value._mpf_
    raise TypeError(f"cannot convert {type(value).__name__} to a binary float")


@dataclass(frozen=True)
class BallReal:
    """Real ball mid ± rad with working precision prec (bits)"""

    mid: tuple
    rad: tuple = fzero
    prec: int = DEFAULT_PREC

    def __post_init__(self):
        if mpf_sign(self.rad) < 0:
            raise ArgumentError("ball radius must be non-negative")
        if not (_finite(self.mid) and _finite(self.rad)):
            raise ArgumentError("ball endpoints must be finite")

    # Construction

    @classmethod
    def exact(cls, value, prec=DEFAULT_PREC):
        """Ball of radius zero around an exactly representable value"""
        return cls(_as_mpf(value), fzero, prec)

    @classmethod
    def from_interval(cls, lo, hi, prec=DEFAULT_PREC, operation='interval'):
        if not (_finite(lo) and _finite(hi)):
            raise DomainError(operation, 'result is unbounded')
        if mpf_gt(lo, hi):
            raise ArgumentError("interval endpoints out of order")
        if lo == hi:
            return cls(lo, fzero, prec)
        mid = mpf_shift(mpf_add(lo, hi, prec, round_nearest), -1)
        rad = _rmax(mpf_sub(hi, mid, RAD_PREC, round_up), mpf_sub(mid, lo, RAD_PREC, round_up))
        return cls(mid, rad, prec)

    def with_prec(self, prec):
        if prec >= self.prec or self.mid[3] <= prec:
            return BallReal(self.mid, self.rad, prec)
        mid, err = _rounded(*self._directed(mpf_add, self.mid, fzero, prec))
        return BallReal(mid, _radd(self.rad, err), prec)

    # Endpoints and predicates

    def lower(self, prec=None):
        return mpf_sub(self.mid, self.rad, prec or self.prec + GUARD_BITS, round_floor)

    def upper(self, prec=None):
        return mpf_add(self.mid, self.rad, prec or self.prec + GUARD_BITS, round_ceiling)

    def interval(self):
        return self.lower(), self.upper()

    def is_exact(self):
        return self.rad == fzero

    def is_positive(self):
        return mpf_gt(self.lower(), fzero)

    def is_nonnegative(self):
        return mpf_ge(self.lower(), fzero)

    def is_negative(self):
        return mpf_lt(self.upper(), fzero)

    def contains_zero(self):
        return not (self.is_positive() or self.is_negative())

    def contains(self, value):
        if isinstance(value, BallReal):
            return mpf_le(self.lower(), value.lower()) and mpf_ge(self.upper(), value.upper())
        if isinstance(value, Fraction):
            lo = from_rational(value.numerator, value.denominator, self.prec + 64, round_floor)
            hi = from_rational(value.numerator, value.denominator, self.prec + 64, round_ceiling)
            return mpf_le(self.lower(), lo) and mpf_ge(self.upper(), hi)
        value = _as_mpf(value)
        return mpf_le(self.lower(), value) and mpf_ge(self.upper(), value)

    def overlaps(self, other):
        other = _coerce(other, self.prec)
        return mpf_le(self.lower(), other.upper()) and mpf_le(other.lower(), self.upper())

    def intersect(self, other):
        other = _coerce(other, self.prec)
        if not self.overlaps(other):
            raise ArgumentError("balls do not intersect")
        lo = self.lower() if mpf_ge(self.lower(), other.lower()) else other.lower()
        hi = self.upper() if mpf_le(self.upper(), other.upper()) else other.upper()
        return BallReal.from_interval(lo, hi, max(self.prec, other.prec))

    def union(self, other):
        other = _coerce(other, self.prec)
        lo = self.lower() if mpf_le(self.lower(), other.lower()) else other.lower()
        hi = self.upper() if mpf_ge(self.upper(), other.upper()) else other.upper()
        return BallReal.from_interval(lo, hi, max(self.prec, other.prec))

    def mag(self):
        """Upper bound for |x| over the ball"""
        return mpf_add(mpf_abs(self.mid), self.rad, RAD_PREC, round_up)

    def mig(self):
        """Lower bound for |x| over the ball (0 if the ball contains 0)"""
        if self.contains_zero():
            return fzero
        return mpf_sub(mpf_abs(self.mid), self.rad, RAD_PREC, round_floor)

    def add_error(self, err):
        err = _as_mpf(err)
        if mpf_sign(err) < 0:
            raise ArgumentError("error bound must be non-negative")
        return BallReal(self.mid, _radd(self.rad, err), self.prec)

    # Arithmetic

    @staticmethod
    def _directed(fn, a, b, prec):
        return fn(a, b, prec, round_floor), fn(a, b, prec, round_ceiling)

    def __add__(self, other):
        if isinstance(other, BallComplex):
            return other + self
        other = _coerce(other, self.prec)
        prec = max(self.prec, other.prec)
        mid, err = _rounded(*self._directed(mpf_add, self.mid, other.mid, prec))
        return BallReal(mid, _radd(self.rad, other.rad, err), prec)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, BallComplex):
            return -other + self
        other = _coerce(other, self.prec)
        prec = max(self.prec, other.prec)
        mid, err = _rounded(*self._directed(mpf_sub, self.mid, other.mid, prec))
        return BallReal(mid, _radd(self.rad, other.rad, err), prec)

    def __rsub__(self, other):
        return _coerce(other, self.prec) - self

    def __neg__(self):
        return BallReal(mpf_neg(self.mid), self.rad, self.prec)

    def __mul__(self, other):
        if isinstance(other, BallComplex):
            return other * self
        other = _coerce(other, self.prec)
        prec = max(self.prec, other.prec)
        mid, err = _rounded(*self._directed(mpf_mul, self.mid, other.mid, prec))
        rad = _radd(
            _rmul(mpf_abs(self.mid), other.rad),
            _rmul(mpf_abs(other.mid), self.rad),
            _rmul(self.rad, other.rad),
            err,
        )
        return BallReal(mid, rad, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, BallComplex):
            return BallComplex(self, BallReal.exact(0, self.prec)) / other
        other = _coerce(other, self.prec)
        if other.contains_zero():
            raise DomainError('div', 'divisor ball contains 0')
        prec = max(self.prec, other.prec)
        mid, err = _rounded(*self._directed(mpf_div, self.mid, other.mid, prec))
        if self.rad == fzero and other.rad == fzero:
            return BallReal(mid, err, prec)
        mb = mpf_abs(other.mid)
        num = _radd(_rmul(mpf_abs(self.mid), other.rad), _rmul(mb, self.rad))
        den = mpf_mul(mb, mpf_sub(mb, other.rad, RAD_PREC, round_floor), RAD_PREC, round_floor)
        return BallReal(mid, _radd(mpf_div(num, den, RAD_PREC, round_up), err), prec)

    def __rtruediv__(self, other):
        return _coerce(other, self.prec) / self

    def __pow__(self, other):
        return self.pow(other)

    def __abs__(self):
        if not self.contains_zero():
            return BallReal(mpf_abs(self.mid), self.rad, self.prec)
        hi = self.mag()
        return BallReal.from_interval(fzero, hi, self.prec)

    def square(self):
        return self._via_interval(lambda iv, wp: mpi_square(iv, wp), 'square')

    def _via_interval(self, fn, operation):
        wp = self.prec + GUARD_BITS
        lo, hi = fn(self.interval(), wp)
        return BallReal.from_interval(lo, hi, self.prec, operation)

    def exp(self):
        return self._via_interval(mpi_exp, 'exp')

    def log(self):
        if not self.is_positive():
            raise DomainError('log', 'ball is not strictly positive')
        return self._via_interval(mpi_log, 'log')

    def sqrt(self):
        if mpf_lt(self.lower(), fzero):
            if mpf_lt(self.upper(), fzero):
                raise DomainError('sqrt', 'ball is negative')
            raise DomainError('sqrt', 'ball straddles 0')
        return self._via_interval(mpi_sqrt, 'sqrt')

    def atan(self):
        return self._via_interval(mpi_atan, 'atan')

    def cos_sin(self):
        wp = self.prec + GUARD_BITS
        (ca, cb), (sa, sb) = mpi_cos_sin(self.interval(), wp)
        return (BallReal.from_interval(ca, cb, self.prec, 'cos'),
                BallReal.from_interval(sa, sb, self.prec, 'sin'))

    def is_integer(self):
        return self.rad == fzero and mpf_floor(self.mid) == self.mid

    def pow(self, other):
        """x**y; integer exponents allow any base, otherwise the base must be positive"""
        if isinstance(other, int):
            wp = self.prec + GUARD_BITS
            if other < 0 and self.contains_zero():
                raise DomainError('pow', 'negative power of a ball containing 0')
            lo, hi = mpi_pow_int(self.interval(), other, wp)
            return BallReal.from_interval(lo, hi, self.prec, 'pow')
        if isinstance(other, BallComplex):
            return BallComplex.from_real(self).pow(other)
        other = _coerce(other, self.prec)
        if other.is_integer():
            return self.pow(to_int(other.mid))
        return (other * self.log()).exp()

    # Output

    def to_float(self):
        return to_float(self.mid)

    __float__ = to_float

    def to_text(self, dps=15):
        return f"{to_str(self.mid, dps)} ± {to_str(self.rad, 3)}"

    def __repr__(self):
        return f"BallReal({self.to_text(repr_dps(self.prec))}, prec={self.prec})"


@dataclass(frozen=True)
class BallComplex:
    """Rectangle re + i·im of two real balls"""

    re: BallReal
    im: BallReal

    @classmethod
    def from_real(cls, value, prec=None):
        value = _coerce(value, prec or DEFAULT_PREC)
        return cls(value, BallReal.exact(0, value.prec))

    @classmethod
    def coerce(cls, value, prec):
        if isinstance(value, BallComplex):
            return value
        return cls.from_real(value, prec)

    @property
    def prec(self):
        return max(self.re.prec, self.im.prec)

    def contains_zero(self):
        return self.re.contains_zero() and self.im.contains_zero()

    def contains(self, value):
        if isinstance(value, BallComplex):
            return self.re.contains(value.re) and self.im.contains(value.im)
        if isinstance(value, complex):
            return self.re.contains(value.real) and self.im.contains(value.imag)
        if hasattr(value, '_mpc_'):
            re_part, im_part = value._mpc_
            return self.re.contains(re_part) and self.im.contains(im_part)
        return self.re.contains(value) and self.im.contains(0)

    def overlaps(self, other):
        other = BallComplex.coerce(other, self.prec)
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)

    def intersect(self, other):
        other = BallComplex.coerce(other, self.prec)
        return BallComplex(self.re.intersect(other.re), self.im.intersect(other.im))

    def add_error(self, err):
        """Widen by a disk of radius err (enclosed by the square of half-width err)"""
        return BallComplex(self.re.add_error(err), self.im.add_error(err))

    def conjugate(self):
        return BallComplex(self.re, -self.im)

    def __add__(self, other):
        other = BallComplex.coerce(other, self.prec)
        return BallComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = BallComplex.coerce(other, self.prec)
        return BallComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return BallComplex.coerce(other, self.prec) - self

    def __neg__(self):
        return BallComplex(-self.re, -self.im)

    def __mul__(self, other):
        if not isinstance(other, BallComplex):
            other = _coerce(other, self.prec)
            return BallComplex(self.re * other, self.im * other)
        return BallComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def norm_squared(self):
        return self.re.square() + self.im.square()

    def __truediv__(self, other):
        if not isinstance(other, BallComplex):
            other = _coerce(other, self.prec)
            return BallComplex(self.re / other, self.im / other)
        if other.contains_zero():
            raise DomainError('div', 'divisor ball contains 0')
        den = other.norm_squared()
        if not den.is_positive():
            raise DomainError('div', 'divisor ball contains 0')
        return BallComplex(
            (self.re * other.re + self.im * other.im) / den,
            (self.im * other.re - self.re * other.im) / den,
        )

    def __rtruediv__(self, other):
        return BallComplex.coerce(other, self.prec) / self

    def __abs__(self):
        return self.norm_squared().sqrt()

    def exp(self):
        scale = self.re.exp()
        cos, sin = self.im.cos_sin()
        return BallComplex(scale * cos, scale * sin)

    def arg(self):
        return atan2(self.im, self.re)

    def log(self):
        """Principal logarithm, imaginary part in (-pi, pi]"""
        if self.contains_zero():
            raise DomainError('log', 'ball contains 0')
        im_exact_zero = self.im.is_exact() and self.im.mid == fzero
        if not im_exact_zero and mpf_lt(self.im.lower(), fzero) and mpf_ge(self.im.upper(), fzero) \
                and mpf_lt(self.re.lower(), fzero):
            raise DomainError('log', 'ball meets the branch cut on the negative real axis')
        modulus = self.norm_squared().log() * BallReal.exact(from_rational(1, 2, 2), self.prec)
        return BallComplex(modulus, self.arg())

    def pow(self, other):
        other = BallComplex.coerce(other, self.prec)
        return (other * self.log()).exp()

    def __pow__(self, other):
        return self.pow(other)

    def to_complex(self):
        return complex(self.re.to_float(), self.im.to_float())

    def to_text(self, dps=15):
        return f"({self.re.to_text(dps)}) + i({self.im.to_text(dps)})"

    def __repr__(self):
        return f"BallComplex({self.to_text(repr_dps(self.prec))})"


def _coerce(value, prec):
    if isinstance(value, BallReal):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, int):
        return BallReal(from_int(value), fzero, prec)
    if isinstance(value, Fraction):
        return ball_from_rational(value.numerator, value.denominator, prec)
    if isinstance(value, float):
        return BallReal(from_float(value), fzero, prec)
    if isinstance(value, str):
        return ball_from_decimal(value, prec)
    if isinstance(value, tuple):
        return BallReal(value, fzero, prec)
    raise TypeError(f"cannot use {type(value).__name__} in ball arithmetic")


def coerce_real(value, prec=DEFAULT_PREC):
    return _coerce(value, prec)


def ball_from_rational(p, q, prec=DEFAULT_PREC):
    """Ball containing p/q with radius at most one ulp"""
    if q == 0:
        raise DomainError('div', 'zero denominator')
    if q < 0:
        p, q = -p, -q
    lo = from_rational(p, q, prec, round_floor)
    hi = from_rational(p, q, prec, round_ceiling)
    if lo == hi:
        return BallReal(lo, fzero, prec)
    mid = from_rational(p, q, prec, round_nearest)
    rad = _rmax(mpf_sub(hi, mid, RAD_PREC, round_up), mpf_sub(mid, lo, RAD_PREC, round_up))
    return BallReal(mid, rad, prec)


def parse_decimal(text):
    """Exact rational value of a signed decimal numeral"""
    if not isinstance(text, str):
        raise ParseError(f"expected a decimal string, got {type(text).__name__}")
    match = DECIMAL_RE.match(text.strip())
    if not match or (match.group(2) is None and not match.group(3)):
        raise ParseError(f"malformed decimal numeral: {text!r}")
    sign, whole, frac, exponent = match.groups()
    whole = whole or '0'
    frac = frac or ''
    exponent = int(exponent or 0)
    if abs(exponent) > MAX_DECIMAL_EXPONENT:
        raise ParseError(f"decimal exponent out of range: {text!r}")
    value = Fraction(int(whole + frac), 10 ** len(frac))
    value *= Fraction(10) ** exponent
    return -value if sign == '-' else value


def as_fraction(value):
    """Exact rational value of an int, float, Fraction or decimal string"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return parse_decimal(value)
    if isinstance(value, bool):
        raise ArgumentError("booleans are not numbers here")
    if isinstance(value, (int, float)):
        return Fraction(value)
    raise ArgumentError(f"cannot use {type(value).__name__} as an exact number")


def ball_from_decimal(text, prec=DEFAULT_PREC):
    """Ball containing the exact value of a decimal string"""
    value = parse_decimal(text)
    return ball_from_rational(value.numerator, value.denominator, prec)


def ball_from_int(n, prec=DEFAULT_PREC):
    return BallReal(from_int(n), fzero, prec)


def atan2(y, x):
    """Principal argument of x + iy as a ball in (-pi, pi]"""
    prec = max(y.prec, x.prec)
    if y.contains_zero() and x.contains_zero():
        raise DomainError('atan2', 'both arguments contain 0')
    wp = prec + GUARD_BITS
    if y.is_exact() and y.mid == fzero and x.is_negative():
        return BallReal.from_interval(mpf_pi(wp, round_floor), mpf_pi(wp, round_ceiling), prec, 'atan2')
    lo, hi = mpi_atan2(y.interval(), x.interval(), wp)
    return BallReal.from_interval(lo, hi, prec, 'atan2')


def pi(prec=DEFAULT_PREC):
    """pi as atan2(0, -1)"""
    return atan2(ball_from_int(0, prec), ball_from_int(-1, prec))


def euler_gamma(prec=DEFAULT_PREC):
    wp = prec + GUARD_BITS
    return BallReal.from_interval(mpf_euler(wp, round_floor), mpf_euler(wp, round_ceiling), prec)


def ball_elementary(op, *args):
    """Dispatch one elementary operation on real or complex balls by name"""
    unary = {
        'exp': lambda a: a.exp(),
        'log': lambda a: a.log(),
        'abs': lambda a: abs(a),
        'sqrt': lambda a: a.sqrt(),
    }
    binary = {
        'add': lambda a, b: a + b,
        'sub': lambda a, b: a - b,
        'mul': lambda a, b: a * b,
        'div': lambda a, b: a / b,
        'pow': lambda a, b: a.pow(b),
        'atan2': atan2,
    }
    if op in unary and len(args) == 1:
        return unary[op](args[0])
    if op in binary and len(args) == 2:
        return binary[op](*args)
    raise ArgumentError(f"unknown operation or arity: {op}/{len(args)}")


def certified_sign(margin):
    """Verdict for an inequality whose margin (bound - value) is the given ball"""
    if margin.is_nonnegative():
        return CERTIFIED_OK
    if margin.is_negative():
        return CERTIFIED_VIOLATION
    return UNDECIDED


def max_upper(*balls):
    """Largest upper endpoint among balls, as a raw float"""
    best = balls[0].upper()
    for ball in balls[1:]:
        if mpf_gt(ball.upper(), best):
            best = ball.upper()
    return best


def mpf_ceil_int(value):
    return to_int(mpf_ceil(value))


def shortest_decimal(value, prec):
    """Shortest decimal string that reads back to exactly `value` at `prec` bits"""
    if value == fzero:
        return '0.0'
    for dps in range(1, repr_dps(max(prec, value[3])) + 2):
        text = to_str(value, dps)
        if from_str(text, max(prec, value[3]), round_nearest) == value:
            return text
    return to_str(value, repr_dps(max(prec, value[3])) + 2)


def read_decimal(text, prec):
    """Inverse of shortest_decimal"""
    return from_str(text.strip(), prec, round_nearest)


def fixed_to_ball(acc, wp, err, prec):
    """Ball for the fixed-point value acc·2^-wp known to within err"""
    exact = from_man_exp(acc, -wp)
    mid = from_man_exp(acc, -wp, prec, round_nearest)
    rounding = mpf_abs(mpf_sub(exact, mid, RAD_PREC, round_up))
    return BallReal(mid, _radd(_as_mpf(err), rounding), prec)
