"""
Explicit bounds on the 1-line under RH up to a height T, and the audit of
their packaged constants.

With L = log t and LL = log log t, for 1e6 <= t <= (1 - delta) T:

    |zeta'/zeta(1+it)| <= 2 LL + 1.219 + 16.108/LL^2 + 1.057 E
    |log zeta(1+it)|   <= log LL + log(2 e^gamma) + 3.404/LL + 0.793 E
    |1/zeta(1+it)|, |zeta(1+it)| <= 2 e^gamma (LL + 3.404 + 9.378/LL) exp(0.793 E)

where E = E_delta(T) = (1/delta^2 + 1) log T/(2 pi T).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import mpmath
from mpmath.libmp import mpf_floor, mpf_lt, to_int

from .balls import (
    CERTIFIED_OK, CERTIFIED_VIOLATION, DEFAULT_PREC, UNDECIDED, BallComplex, BallReal,
    as_fraction, ball_from_decimal, ball_from_int, ball_from_rational, certified_sign, coerce_real,
    euler_gamma, parse_decimal, pi,
)
from .exceptions import ArgumentError, AuditFailure, UndecidedError, VerificationError
from .prime_sums import cached_table, log_zeta_32_tail, weighted_sum
from .zeta_eval import EvalConfig, zeta_jet

logger = logging.getLogger(__name__)

THEOREM_MIN_T = 10 ** 6
MIN_VERIFIED_HEIGHT = 10 ** 9

LAMBDA0_START = '1.25'

LABEL_CERTIFIED = 'certified'
LABEL_LIMIT = 'limit'

QUANTITIES = ('logderiv', 'inv_zeta', 'zeta', 'log_zeta')

# Packaged constants
LOGDERIV_SHIFT = '1.219'
LOGDERIV_INVERSE_SQUARE = '16.108'
LOGDERIV_TAIL = '1.057'
LOG_ZETA_INVERSE = '3.404'
LOG_ZETA_TAIL = '0.793'
ZETA_INVERSE = '9.378'
EXP_QUADRATIC = '0.8093'
EXP_RANGE = '1.297'
RAMARE_CONSTANT = '1.3'
SMALL_TERMS = '3.2'
POLE_HALF = '1.6'

COROLLARY_LOGDERIV = '0.639'
COROLLARY_INV_ZETA = '2.506'
COROLLARY_WINDOW = (Fraction(10 ** 6), parse_decimal('2.99997e12'))

AUDIT_T_MIN = 10 ** 6
AUDIT_T_MAX = 10 ** 12
EXP_GRID = 10_000


@dataclass(frozen=True)
class Constants:
    lambda0: BallReal
    A0: BallReal
    euler_gamma: BallReal
    log_zeta_32: BallReal
    prec: int = DEFAULT_PREC


@dataclass(frozen=True)
class BoundParams:
    """Verified height T >= 1e9 and the margin delta in (0, 1)"""

    T: Fraction
    delta: Fraction
    prec: int = DEFAULT_PREC

    def __post_init__(self):
        if self.T < MIN_VERIFIED_HEIGHT:
            raise ArgumentError(f"the verified height T must be at least 1e9, got {float(self.T):g}")
        if not 0 < self.delta < 1:
            raise ArgumentError(f"delta must lie in (0, 1), got {float(self.delta):g}")

    @classmethod
    def of(cls, T, delta, prec=DEFAULT_PREC):
        return cls(as_fraction(T), as_fraction(delta), prec)

    @cached_property
    def e_delta(self):
        return e_delta(self.T, self.delta, self.prec)

    @property
    def t_limit(self):
        """(1 - delta)·T, the largest height the bounds cover"""
        return (1 - self.delta) * self.T


@dataclass(frozen=True)
class TheoremBounds:
    t: Fraction
    logderiv: BallReal
    log_zeta: BallReal
    inv_zeta: BallReal
    zeta: BallReal
    label: str = LABEL_CERTIFIED

    def bound_for(self, quantity):
        return getattr(self, quantity)


@dataclass(frozen=True)
class ComparisonBound:
    name: str
    quantity: str
    value: BallReal | None
    window: tuple
    conditional: bool
    in_window: bool


@dataclass
class AuditStep:
    step: str
    description: str
    verdict: str = CERTIFIED_OK
    worst_margin: BallReal | None = None
    worst_point: str | None = None
    failing_point: str | None = None
    checked: int = 0

    def record(self, point, margin):
        self.checked += 1
        verdict = certified_sign(margin)
        if self.worst_margin is None or mpf_lt(margin.lower(), self.worst_margin.lower()):
            self.worst_margin, self.worst_point = margin, point
        if verdict == CERTIFIED_VIOLATION and self.verdict != CERTIFIED_VIOLATION:
            self.verdict, self.failing_point = CERTIFIED_VIOLATION, point
        elif verdict == UNDECIDED and self.verdict == CERTIFIED_OK:
            self.verdict, self.failing_point = UNDECIDED, point


@dataclass
class AuditReport:
    params: BoundParams
    grid: list
    steps: list = field(default_factory=list)

    @property
    def violations(self):
        return [step for step in self.steps if step.verdict == CERTIFIED_VIOLATION]

    @property
    def undecided(self):
        return [step for step in self.steps if step.verdict == UNDECIDED]

    @property
    def passed(self):
        return not self.violations and not self.undecided


@dataclass(frozen=True)
class CorollaryReport:
    rows: list
    tightness: tuple


def _constant(text, prec):
    return ball_from_decimal(text, prec)


def _lambda_residual(lam):
    """e^lambda (lambda - 1) - 1"""
    return lam.exp() * (lam - 1) - 1


def solve_lambda0(prec=DEFAULT_PREC):
    """
    The minimiser lambda0 of (1 + e^lambda)/lambda on (0, oo), i.e. the root of
    e^lambda (lambda - 1) = 1, and the minimum A0. Newton from 1.25, then a
    sign change of the (increasing) residual certifies the bracket.
    """
    wp = prec + 32
    with mpmath.workprec(wp):
        lam = mpmath.mpf(LAMBDA0_START)
        for _ in range(100):
            step = (mpmath.exp(lam) * (lam - 1) - 1) / (lam * mpmath.exp(lam))
            lam -= step
            if abs(step) < mpmath.ldexp(1, 8 - wp):
                break
        width = mpmath.ldexp(1, -prec)
        for _ in range(16):
            lo = BallReal.exact((lam - width)._mpf_, wp)
            hi = BallReal.exact((lam + width)._mpf_, wp)
            if _lambda_residual(lo).is_negative() and _lambda_residual(hi).is_positive():
                break
            width *= 256
        else:
            raise UndecidedError("could not bracket lambda0", prec)
    lambda0 = BallReal.from_interval(lo.mid, hi.mid, prec)
    A0 = (1 + lambda0.exp()) / lambda0
    return lambda0, A0


def log_zeta_three_halves(prec=DEFAULT_PREC):
    """
    log zeta(3/2) = sum_n Lambda(n)/(n^{3/2} log n): the Euler-Maclaurin value
    intersected with the sieved series plus its tail.
    """
    cfg = EvalConfig.from_settings(prec=prec)
    value = zeta_jet(BallComplex.from_real(ball_from_rational(3, 2, prec)), 0, cfg)[0].re.log()
    limit = cfg.series_limit
    partial = weighted_sum(cached_table(limit), limit, ball_from_rational(3, 2, prec), 1, prec)
    tail = log_zeta_32_tail(limit, prec)
    series = BallReal.from_interval(partial.lower(), (partial + tail).upper(), prec)
    if not value.overlaps(series):
        raise VerificationError(f"log zeta(3/2) enclosures disagree: {value.to_text(12)} vs {series.to_text(12)}")
    return value.intersect(series)


@lru_cache(maxsize=8)
def compute_constants(prec=DEFAULT_PREC):
    lambda0, A0 = solve_lambda0(prec)
    consts = Constants(lambda0, A0, euler_gamma(prec), log_zeta_three_halves(prec), prec)
    logger.info("Constants at %d bits: lambda0=%s A0=%s", prec, lambda0.to_text(12), A0.to_text(12))
    return consts


def e_delta(T, delta, prec=DEFAULT_PREC):
    """E_delta(T) = (1/delta^2 + 1)·log T/(2 pi T)"""
    T = as_fraction(T)
    delta = as_fraction(delta)
    if T <= 1:
        raise ArgumentError(f"E_delta needs T > 1, got {float(T):g}")
    if not 0 < delta < 1:
        raise ArgumentError(f"E_delta needs 0 < delta < 1, got {float(delta):g}")
    height = ball_from_rational(T.numerator, T.denominator, prec)
    factor = ball_from_rational(delta.denominator ** 2 + delta.numerator ** 2, delta.numerator ** 2, prec)
    return factor * height.log() / (2 * pi(prec) * height)


def _height(t, prec):
    value = as_fraction(t)
    if value <= 1:
        raise ArgumentError(f"t must exceed 1, got {float(value):g}")
    return value, ball_from_rational(value.numerator, value.denominator, prec)


def check_theorem_range(t, params):
    t = as_fraction(t)
    if t < THEOREM_MIN_T or t > params.t_limit:
        raise ArgumentError(
            f"the bounds hold for 1e6 <= t <= (1 - delta) T = {float(params.t_limit):g}; got t={float(t):g}"
        )
    return t


def _log_powers(t_ball):
    log_t = t_ball.log()
    return log_t, log_t.log()


def epsilon_factor(alpha, t, consts):
    """epsilon(alpha, t) = 1/(A0^-1 (log t)^(2 alpha - 1) - 1)"""
    prec = consts.prec
    alpha = coerce_real(alpha, prec)
    _, t_ball = _height(t, prec)
    log_t, log_log_t = _log_powers(t_ball)
    denominator = ((2 * alpha - 1) * log_log_t).exp() / consts.A0 - 1
    if denominator.contains_zero():
        raise UndecidedError("epsilon denominator straddles 0", prec)
    if denominator.is_negative():
        raise ArgumentError("epsilon needs A0^-1 (log t)^(2 alpha - 1) > 1")
    return 1 / denominator


def zero_sum_coefficient(alpha, t, consts):
    """A0 (log t)^(1 - 2 alpha), the factor in front of |zeta'/zeta| in the zero sum"""
    prec = consts.prec
    alpha = coerce_real(alpha, prec)
    _, t_ball = _height(t, prec)
    return consts.A0 * ((1 - 2 * alpha) * t_ball.log().log()).exp()


def prime_cutoff(t, prec=DEFAULT_PREC):
    """floor(log^2 t), certified"""
    _, t_ball = _height(t, prec)
    square = t_ball.log().square()
    lo, hi = to_int(mpf_floor(square.lower())), to_int(mpf_floor(square.upper()))
    if lo != hi:
        raise UndecidedError("log^2 t too close to an integer to fix the prime-sum cutoff", prec)
    return lo


def _check_alpha(alpha):
    if not (alpha - 1).is_nonnegative() or not (ball_from_rational(3, 2, alpha.prec) - alpha).is_nonnegative():
        raise ArgumentError("alpha must lie in [1, 3/2]")


def general_alpha_bound(alpha, t, params, consts, primes):
    """
    (1 + eps(alpha, t))·[A0/2 (log t)^(2 - 2 alpha) + sum_{n <= log^2 t} Lambda(n)/n^alpha
                         + (2 alpha - 1)/lambda0 E_delta(T) + 3.2/t^2],
    an upper bound for |zeta'/zeta(alpha + it)|.
    """
    prec = consts.prec
    check_theorem_range(t, params)
    alpha = coerce_real(alpha, prec)
    _check_alpha(alpha)
    _, t_ball = _height(t, prec)
    log_log_t = t_ball.log().log()
    cutoff = prime_cutoff(t, prec)
    primes_part = weighted_sum(primes, cutoff, alpha, 0, prec)
    bracket = (
        consts.A0 / 2 * ((2 - 2 * alpha) * log_log_t).exp()
        + primes_part
        + (2 * alpha - 1) / consts.lambda0 * params.e_delta
        + _constant(SMALL_TERMS, prec) / t_ball.square()
    )
    return (1 + epsilon_factor(alpha, t, consts)) * bracket


def theorem_bounds(t, params, consts=None, limit=False, relaxed=False):
    """
    The four packaged bounds at t; limit=True sets E_delta to 0 (the full-RH
    surrogate). relaxed=True evaluates the formulas outside 1e6 <= t <= (1 - delta) T,
    where they are an observation only.
    """
    prec = params.prec
    consts = consts or compute_constants(prec)
    t_value = as_fraction(t) if relaxed else check_theorem_range(t, params)
    if t_value <= 16:
        raise ArgumentError("the packaged bounds need log log t > 1")
    _, t_ball = _height(t_value, prec)
    _, ll = _log_powers(t_ball)
    tail = ball_from_int(0, prec) if limit else params.e_delta
    gamma = consts.euler_gamma
    two_exp_gamma = 2 * gamma.exp()
    logderiv = (
        2 * ll + _constant(LOGDERIV_SHIFT, prec) + _constant(LOGDERIV_INVERSE_SQUARE, prec) / ll.square()
        + _constant(LOGDERIV_TAIL, prec) * tail
    )
    log_zeta = (
        ll.log() + ball_from_int(2, prec).log() + gamma + _constant(LOG_ZETA_INVERSE, prec) / ll
        + _constant(LOG_ZETA_TAIL, prec) * tail
    )
    inv_zeta = two_exp_gamma * (ll + _constant(LOG_ZETA_INVERSE, prec) + _constant(ZETA_INVERSE, prec) / ll) \
        * (_constant(LOG_ZETA_TAIL, prec) * tail).exp()
    return TheoremBounds(
        t=t_value,
        logderiv=logderiv,
        log_zeta=log_zeta,
        inv_zeta=inv_zeta,
        zeta=inv_zeta,
        label=LABEL_LIMIT if limit else LABEL_CERTIFIED,
    )


def _ball_min(*balls):
    lo, hi = balls[0].lower(), balls[0].upper()
    for ball in balls[1:]:
        if mpf_lt(ball.lower(), lo):
            lo = ball.lower()
        if mpf_lt(ball.upper(), hi):
            hi = ball.upper()
    return BallReal.from_interval(lo, hi, balls[0].prec)


def _comparison_values(t_ball, prec):
    log_t = t_ball.log()
    ll = log_t.log()
    gamma = euler_gamma(prec)
    c = lambda text: _constant(text, prec)  # noqa: E731
    return {
        'unconditional_inv_zeta': lambda: c('42.9') * log_t,
        'unconditional_logderiv': lambda: c('40.14') * log_t,
        'patel_zeta': lambda: _ball_min(log_t, log_t / 2 + c('1.93'), log_t / 5 + c('44.02')),
        'corollary_logderiv': lambda: c(COROLLARY_LOGDERIV) * log_t,
        'corollary_inv_zeta': lambda: c(COROLLARY_INV_ZETA) * log_t,
        'rh_inv_zeta': lambda: 12 * gamma.exp() / pi(prec).square() * (
            ll - ball_from_int(2, prec).log() + ball_from_rational(1, 2, prec) + 1 / ll + 14 * ll / log_t
        ),
        'rh_logderiv': lambda: 2 * ll - c('0.4989') + c('5.35') * ll.square() / log_t,
    }


COMPARISONS = (
    # name, quantity, window, conditional on RH
    ('unconditional_inv_zeta', 'inv_zeta', (Fraction(133), None), False),
    ('unconditional_logderiv', 'logderiv', (Fraction(133), None), False),
    ('patel_zeta', 'zeta', (Fraction(3), None), False),
    ('corollary_logderiv', 'logderiv', COROLLARY_WINDOW, False),
    ('corollary_inv_zeta', 'inv_zeta', COROLLARY_WINDOW, False),
    ('rh_inv_zeta', 'inv_zeta', (Fraction(10 ** 10), None), True),
    ('rh_logderiv', 'logderiv', (Fraction(10 ** 30), None), True),
)


def comparison_bounds(t, prec=DEFAULT_PREC):
    """Literature bounds at t, each with its validity window; values outside the window are kept"""
    t_value, t_ball = _height(t, prec)
    formulas = _comparison_values(t_ball, prec)
    out = []
    for name, quantity, window, conditional in COMPARISONS:
        lo, hi = window
        inside = t_value >= lo and (hi is None or t_value <= hi)
        try:
            value = formulas[name]()
        except VerificationError as exc:
            logger.debug("comparison %s undefined at t=%s: %s", name, float(t_value), exc)
            value = None
        out.append(ComparisonBound(name, quantity, value, window, conditional, inside))
    return out


def height_text(value):
    """Decimal text of a height, exact for strings and integers"""
    if isinstance(value, str):
        return value.strip()
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return mpmath.nstr(mpmath.mpf(value.numerator) / value.denominator, 17)


def log_grid(t_min, t_max, steps):
    """steps log-spaced heights from t_min to t_max as 15-digit decimal strings, endpoints exact"""
    lo, hi = as_fraction(t_min), as_fraction(t_max)
    if steps < 1:
        raise ArgumentError("a grid needs at least one point")
    if lo <= 0 or hi < lo:
        raise ArgumentError("log grids need 0 < t_min <= t_max")
    first, last = height_text(t_min), height_text(t_max)
    if steps == 1 or lo == hi:
        return [first] * steps if lo == hi else [first]
    points = [first]
    with mpmath.workdps(40):
        a = mpmath.log(mpmath.mpf(lo.numerator) / lo.denominator)
        b = mpmath.log(mpmath.mpf(hi.numerator) / hi.denominator)
        for k in range(1, steps - 1):
            points.append(mpmath.nstr(mpmath.exp(a + (b - a) * k / (steps - 1)), 15))
    points.append(last)
    return points


def default_audit_grid(points, t_min=AUDIT_T_MIN, t_max=AUDIT_T_MAX):
    return log_grid(str(t_min), str(t_max), points)


def _raw_logderiv(t, params, consts):
    prec = consts.prec
    _, t_ball = _height(t, prec)
    _, ll = _log_powers(t_ball)
    eps = epsilon_factor(1, t, consts)
    bracket = (
        consts.A0 / 2 + 2 * ll - consts.euler_gamma + _constant(RAMARE_CONSTANT, prec) / (4 * ll.square())
        + params.e_delta / consts.lambda0 + _constant(SMALL_TERMS, prec) / t_ball.square()
    )
    return (1 + eps) * bracket


def _raw_log_zeta(t, params, consts):
    prec = consts.prec
    _, t_ball = _height(t, prec)
    _, ll = _log_powers(t_ball)
    eps = epsilon_factor(1, t, consts)
    bracket = (
        ll.log() + ball_from_int(2, prec).log() + consts.euler_gamma + consts.A0 / (4 * ll)
        + 1 / (4 * ll.square()) + 3 * params.e_delta / (4 * consts.lambda0)
    )
    return (1 + eps) * bracket


def run_audit(params, t_grid=None, consts=None, exp_points=EXP_GRID):
    """Evaluate every packaging step; never raises on a failed step"""
    prec = params.prec
    consts = consts or compute_constants(prec)
    grid = list(t_grid) if t_grid is not None else default_audit_grid(200)
    for t in grid:
        check_theorem_range(t, params)
    report = AuditReport(params, grid)
    c = lambda text: _constant(text, prec)  # noqa: E731

    packaging_ld = AuditStep('logderiv_packaging', 'raw alpha=1 assembly <= packaged zeta\'/zeta bound')
    packaging_lz = AuditStep('log_zeta_packaging', 'raw log-zeta assembly <= packaged log zeta bound')
    packaging_iz = AuditStep('inv_zeta_packaging', 'exp(packaged log zeta bound) <= packaged 1/zeta bound')
    exp_range = AuditStep('exp_argument_range', '3.404/log log t <= 1.297')
    pole = AuditStep('pole_negligible', '-A0/(4 log t log log t) + 1.6/t^2 < 0')
    prime_tail = AuditStep('prime_tail_absorption',
                           '(1 + eps) sum_{n > log^2 t} Lambda(n)/(n^1.5 log n) <= eps log zeta(3/2)')
    for t in grid:
        _, t_ball = _height(t, prec)
        log_t, ll = _log_powers(t_ball)
        packaged = theorem_bounds(t, params, consts)
        packaging_ld.record(t, packaged.logderiv - _raw_logderiv(t, params, consts))
        packaging_lz.record(t, packaged.log_zeta - _raw_log_zeta(t, params, consts))
        packaging_iz.record(t, packaged.inv_zeta - packaged.log_zeta.exp())
        exp_range.record(t, c(EXP_RANGE) - c(LOG_ZETA_INVERSE) / ll)
        pole.record(t, consts.A0 / (4 * log_t * ll) - c(POLE_HALF) / t_ball.square())
        eps = epsilon_factor(1, t, consts)
        tail = log_zeta_32_tail(prime_cutoff(t, prec), prec)
        prime_tail.record(t, eps * consts.log_zeta_32 - (1 + eps) * tail)

    exp_grid = AuditStep('exp_quadratic_grid', 'e^x <= 1 + x + 0.8093 x^2 on a grid of (0, 1.297]')
    top = parse_decimal(EXP_RANGE)
    quadratic = c(EXP_QUADRATIC)
    for k in range(1, exp_points + 1):
        x_value = top * k / exp_points
        x = ball_from_rational(x_value.numerator, x_value.denominator, prec)
        exp_grid.record(str(float(x_value)), 1 + x + quadratic * x.square() - x.exp())

    exp_interval = AuditStep('exp_quadratic_interval', '(e^x - 1 - x)/x^2 <= 0.8093 at x = 1.297 (increasing in x)')
    x = c(EXP_RANGE)
    exp_interval.record(EXP_RANGE, quadratic - (x.exp() - 1 - x) / x.square())

    eps_min = epsilon_factor(1, THEOREM_MIN_T, consts)
    coeff_ld = AuditStep('logderiv_tail_coefficient', '(1 + eps(1, 1e6))/lambda0 <= 1.057')
    coeff_ld.record(str(THEOREM_MIN_T), c(LOGDERIV_TAIL) - (1 + eps_min) / consts.lambda0)
    coeff_lz = AuditStep('log_zeta_tail_coefficient', '3(1 + eps(1, 1e6))/(4 lambda0) <= 0.793')
    coeff_lz.record(str(THEOREM_MIN_T), c(LOG_ZETA_TAIL) - 3 * (1 + eps_min) / (4 * consts.lambda0))
    coeff_z = AuditStep('zeta_inverse_coefficient', '0.8093·3.404^2 <= 9.378')
    coeff_z.record(None, c(ZETA_INVERSE) - quadratic * c(LOG_ZETA_INVERSE).square())

    monotone = AuditStep('logderiv_monotone', '(log log t)^3 >= 16.108 from the first grid point on')
    first = min(grid, key=as_fraction)
    _, first_ball = _height(first, prec)
    monotone.record(first, _log_powers(first_ball)[1].pow(3) - c(LOGDERIV_INVERSE_SQUARE))

    report.steps = [
        packaging_ld, packaging_lz, exp_grid, exp_interval, packaging_iz, coeff_ld, coeff_lz, coeff_z,
        exp_range, pole, prime_tail, monotone,
    ]
    for step in report.steps:
        logger.debug("audit %s: %s over %d points", step.step, step.verdict, step.checked)
    return report


def audit_constants(params, t_grid=None, consts=None, exp_points=EXP_GRID):
    """run_audit, raising AuditFailure at the first certified violation"""
    report = run_audit(params, t_grid, consts, exp_points)
    for step in report.violations:
        raise AuditFailure(step.step, step.failing_point, step.worst_margin)
    return report


def corollary_check(params, t_grid, consts=None):
    """
    Margins of logderiv <= 0.639 log t and inv_zeta <= 2.506 log t on the
    grid, plus the relative slack of both at the first grid point.
    """
    prec = params.prec
    consts = consts or compute_constants(prec)
    rows = []
    for t in t_grid:
        _, t_ball = _height(t, prec)
        log_t = t_ball.log()
        packaged = theorem_bounds(t, params, consts)
        rows.append((
            t,
            _constant(COROLLARY_LOGDERIV, prec) * log_t - packaged.logderiv,
            _constant(COROLLARY_INV_ZETA, prec) * log_t - packaged.inv_zeta,
        ))
    if not rows:
        raise ArgumentError("corollary check needs a non-empty grid")
    first_t, ld_margin, iz_margin = rows[0]
    log_first = _height(first_t, prec)[1].log()
    tightness = (
        ld_margin / (_constant(COROLLARY_LOGDERIV, prec) * log_first),
        iz_margin / (_constant(COROLLARY_INV_ZETA, prec) * log_first),
    )
    return CorollaryReport(rows, tightness)
