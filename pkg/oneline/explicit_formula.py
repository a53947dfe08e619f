"""
Term-by-term check of the explicit formula, for x, y >= 2 and s = alpha + it:

    zeta'/zeta(s) = - sum_rho ((xy)^(rho-s) - x^(rho-s)) / ((rho-s)^2 log y)
                    - sum_k ((xy)^(-2k-s) - x^(-2k-s)) / ((2k+s)^2 log y)
                    + ((xy)^(1-s) - x^(1-s)) / ((1-s)^2 log y)
                    - sum_{n <= xy} Lambda(n) w(n) / n^s

with w(n) = 1 for n <= x and log(xy/n)/log y for x < n <= xy.

Zeros enter as 1/2 +/- i·gamma up to the height the table is complete to;
everything above is covered by zero_tail_budget instead of being summed.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from joblib import Parallel, delayed
from mpmath.libmp import from_int, mpf_floor, mpf_le, to_int

from .balls import (
    DEFAULT_PREC, BallComplex, BallReal, ball_from_decimal, ball_from_int, ball_from_rational,
    certified_sign, coerce_real, UNDECIDED,
)
from .bounds import compute_constants
from .exceptions import ArgumentError, CoverageError, UndecidedError
from .power_sums import ULP_BUDGET, vector_dirichlet_sum
from .prime_sums import log_prime
from .zero_data import check_proximity, envelope_factor, tail_square_bound
from .zeta_eval import EvalConfig, log_deriv

logger = logging.getLogger(__name__)

ZERO_CHUNK = 4096
MIN_HEIGHT = 10
BALL_TERMS = 5000
TRIVIAL_MAX_TERMS = 10_000

# Small-term constants, in units of 1/t^2
TRIVIAL_BOUND = '0.3'
POLE_BOUND = '2.9'
SMALL_BOUND = '3.2'


@dataclass(frozen=True)
class FormulaParams:
    x: BallReal
    y: BallReal
    s: BallComplex

    def __post_init__(self):
        two = from_int(2)
        if not mpf_le(two, self.x.lower()) or not mpf_le(two, self.y.lower()):
            raise ArgumentError("the explicit formula needs x >= 2 and y >= 2")
        alpha = self.s.re
        if not (alpha - 1).is_nonnegative() or not (ball_from_rational(3, 2, alpha.prec) - alpha).is_nonnegative():
            raise ArgumentError("Re s must lie in [1, 3/2]")

    @classmethod
    def of(cls, x, y, alpha, t, prec=DEFAULT_PREC):
        return cls(coerce_real(x, prec), coerce_real(y, prec),
                   BallComplex(coerce_real(alpha, prec), coerce_real(t, prec)))

    @property
    def prec(self):
        return self.s.prec

    @property
    def xy(self):
        return self.x * self.y


@dataclass(frozen=True)
class FormulaSides:
    lhs: BallComplex
    zero_term: BallComplex
    trivial_term: BallComplex
    pole_term: BallComplex
    prime_term: BallComplex
    zero_tail_budget: BallReal
    zeros_used: int

    @property
    def rhs(self):
        return -self.zero_term - self.trivial_term + self.pole_term - self.prime_term

    @property
    def residual(self):
        return abs(self.lhs - self.rhs)


@dataclass(frozen=True)
class InstantiationIdentities:
    zero_coefficient: BallReal
    zero_coefficient_closed: BallReal
    tail_coefficient: BallReal
    tail_coefficient_bound: BallReal


def instantiate(alpha, t, consts=None, prec=DEFAULT_PREC):
    """y = exp(lambda0/(alpha - 1/2)), x = max(log^2 t / y, 2)"""
    consts = consts or compute_constants(prec)
    prec = consts.prec
    alpha = coerce_real(alpha, prec)
    t = coerce_real(t, prec)
    y = (consts.lambda0 / (alpha - ball_from_rational(1, 2, prec))).exp()
    x = t.log().square() / y
    if not mpf_le(from_int(2), x.lower()):
        logger.debug("log^2 t / y = %s below 2; using x = 2", x.to_text(8))
        x = ball_from_int(2, prec)
    return FormulaParams(x, y, BallComplex(alpha, t))


def instantiation_identities(alpha, t, consts=None, prec=DEFAULT_PREC):
    """
    x^(1/2-alpha)(y^(1/2-alpha) + 1)/((alpha - 1/2) log y) against A0 (log t)^(1 - 2 alpha), and
    x^(1-alpha)(y^(1-alpha) + 1)/log y against (2 alpha - 1)/lambda0, for the instantiated x, y.
    """
    consts = consts or compute_constants(prec)
    prec = consts.prec
    params = instantiate(alpha, t, consts)
    alpha = params.s.re
    half = ball_from_rational(1, 2, prec)
    if not mpf_le(from_int(2), (params.s.im.log().square() / params.y).lower()):
        raise ArgumentError("x was clipped to 2; the identities need x = log^2 t / y")
    log_x, log_y = params.x.log(), params.y.log()
    log_log_t = params.s.im.log().log()
    zero_coefficient = ((half - alpha) * log_x).exp() * (((half - alpha) * log_y).exp() + 1) \
        / ((alpha - half) * log_y)
    closed = consts.A0 * ((1 - 2 * alpha) * log_log_t).exp()
    tail = ((1 - alpha) * log_x).exp() * (((1 - alpha) * log_y).exp() + 1) / log_y
    return InstantiationIdentities(zero_coefficient, closed, tail, (2 * alpha - 1) / consts.lambda0)


def weight_w(n, p):
    """w(n) for 2 <= n <= xy; near x or xy the ball covers both possible branches"""
    prec = p.prec
    one, zero = ball_from_int(1, prec), ball_from_int(0, prec)
    n_ball = ball_from_int(n, prec)
    over = n_ball - p.xy
    if n < 2 or over.is_positive():
        raise ArgumentError(f"w(n) is defined for 2 <= n <= xy, got n={n}")
    below_x = p.x - n_ball
    if below_x.is_nonnegative():
        return one
    value = (p.xy / n_ball).log() / p.y.log()
    if not below_x.is_negative():
        value = value.union(one)
    if not over.is_negative():
        value = value.union(zero)
    return value


def prime_limit(p):
    """floor(xy), the largest n the prime term reaches"""
    return to_int(mpf_floor(p.xy.upper()))


def _prime_cutoff(p, primes):
    cutoff = prime_limit(p)
    if cutoff > primes.limit:
        raise CoverageError(f"the prime term needs a sieve up to {cutoff}, table stops at {primes.limit}",
                            required=cutoff)
    return cutoff


def prime_term(p, primes):
    """sum_{n <= xy} Lambda(n) w(n) n^-s"""
    prec = p.prec
    s = p.s
    cutoff = _prime_cutoff(p, primes)
    plateau = primes.count_upto(to_int(mpf_floor(p.x.lower())))
    total = BallComplex.from_real(0, prec)
    if plateau > BALL_TERMS:
        logs = primes.exponents[:plateau] * np.log(primes.bases[:plateau].astype(np.float64))
        weights = np.log(primes.bases[:plateau].astype(np.float64))
        total = vector_dirichlet_sum(weights, logs, s.re, s.im, prec,
                                     log_ulps=ULP_BUDGET + 1, weight_ulps=ULP_BUDGET)
        start = plateau
    else:
        start = 0
    stop = primes.count_upto(cutoff)
    for p_, k, n in zip(primes.bases[start:stop].tolist(), primes.exponents[start:stop].tolist(),
                        primes.powers[start:stop].tolist()):
        log_p = log_prime(p_, prec)
        decay = (-(s * (log_p * k))).exp()
        total = total + decay * (log_p * weight_w(n, p))
    return total


def _zero_chunk(args):
    """sum over the chunk's ordinates of the two conjugate zero terms, before the -1/log y factor"""
    texts, accuracy, x, y, s, prec = args
    log_xy = (x * y).log()
    log_x = x.log()
    accuracy = ball_from_rational(accuracy.numerator, accuracy.denominator, 30).upper()
    real = ball_from_rational(1, 2, prec) - s.re
    total = BallComplex.from_real(0, prec)
    for text in texts:
        gamma = ball_from_decimal(text, prec).add_error(accuracy)
        for sign in (1, -1):
            u = BallComplex(real, gamma * sign - s.im)
            total = total + ((u * log_xy).exp() - (u * log_x).exp()) / (u * u)
    return total


def zero_term(p, table, workers=1):
    """sum over 1/2 +/- i gamma, gamma <= claimed_complete_to, of ((xy)^(rho-s) - x^(rho-s))/((rho-s)^2 log y)"""
    prec = p.prec
    count = table.count_upto(table.claimed_complete_to)
    texts = table.texts[:count]
    jobs = [(texts[i:i + ZERO_CHUNK], table.accuracy, p.x, p.y, p.s, prec) for i in range(0, count, ZERO_CHUNK)]
    if workers > 1 and len(jobs) > 1:
        parts = Parallel(n_jobs=workers)(delayed(_zero_chunk)(job) for job in jobs)
    else:
        parts = [_zero_chunk(job) for job in jobs]
    total = BallComplex.from_real(0, prec)
    for part in parts:
        total = total + part
    return total / p.y.log(), count


def trivial_term(p):
    """sum_{k >= 1} ((xy)^(-2k-s) - x^(-2k-s))/((2k+s)^2 log y), truncated with a geometric tail"""
    prec = p.prec
    s = p.s
    log_xy, log_x, log_y = p.xy.log(), p.x.log(), p.y.log()
    inverse_x_square = (-2 * log_x).exp()
    # |term_k| <= 2 x^(-2k-alpha)/(t^2 log y) and x^-2 <= 1/4
    scale = 2 * (-(s.re * log_x)).exp() / (s.im.square() * log_y)
    total = BallComplex.from_real(0, prec)
    power = inverse_x_square
    threshold = ball_from_rational(1, 1 << (prec + 8), prec)
    for k in range(1, TRIVIAL_MAX_TERMS):
        shift = s + 2 * k
        total = total + ((-(shift * log_xy)).exp() - (-(shift * log_x)).exp()) / (shift * shift)
        power = power * inverse_x_square
        tail = scale * power / (1 - inverse_x_square)
        if (threshold - tail).is_positive():
            break
    return (total / log_y).add_error(tail.upper())


def pole_term(p):
    """((xy)^(1-s) - x^(1-s))/((1-s)^2 log y)"""
    u = 1 - p.s
    return ((u * p.xy.log()).exp() - (u * p.x.log()).exp()) / (u * u * p.y.log())


def zero_tail_budget(p, table):
    """
    x^(1-alpha)(y^(1-alpha) + 1)/log y · (1/delta^2 + 1)·tail(G), bounding the zeros
    above G = claimed_complete_to with delta = 1 - t/G.
    """
    prec = p.prec
    split = table.claimed_complete_to
    one_minus = 1 - p.s.re
    factor = (one_minus * p.x.log()).exp() * ((one_minus * p.y.log()).exp() + 1) / p.y.log()
    t = _upper_value(p.s.im)
    tail = envelope_factor(t, split, prec) * tail_square_bound(split, allow_below_gate=True, prec=prec)
    return factor * tail


def _upper_value(ball):
    """Upper endpoint of a ball as an exact rational"""
    sign, man, exp, _ = ball.upper()
    value = Fraction(man) * Fraction(2) ** exp
    return -value if sign else value


def formula_sides(p, table, primes, cfg=None, workers=1):
    cfg = cfg or EvalConfig.from_settings(prec=p.prec)
    if not (p.s.im - MIN_HEIGHT).is_nonnegative():
        raise ArgumentError(f"the explicit-formula check needs Im s >= {MIN_HEIGHT}")
    check_proximity(table, _upper_value(p.s.im))
    lhs = log_deriv(p.s, cfg)
    zeros, used = zero_term(p, table, workers)
    sides = FormulaSides(
        lhs=lhs,
        zero_term=zeros,
        trivial_term=trivial_term(p),
        pole_term=pole_term(p),
        prime_term=prime_term(p, primes),
        zero_tail_budget=zero_tail_budget(p, table),
        zeros_used=used,
    )
    logger.debug("explicit formula at s=%s: %d zeros, residual %s", p.s.to_text(10), used,
                 sides.residual.to_text(6))
    return sides


def residual_check(p, table, primes, cfg=None, workers=1, strict=True, sides=None):
    """zero_tail_budget - |lhs - rhs|; with strict, a margin straddling 0 raises UndecidedError"""
    sides = sides or formula_sides(p, table, primes, cfg, workers)
    margin = sides.zero_tail_budget - sides.residual
    if strict and certified_sign(margin) == UNDECIDED:
        raise UndecidedError(
            "explicit-formula margin straddles 0; use a zero table complete to a larger height "
            "or a higher precision", p.prec,
        )
    return margin


def small_term_checks(sides, t, prec=DEFAULT_PREC):
    """Margins of |trivial| <= 0.3/t^2, |pole| <= 2.9/t^2 and their sum <= 3.2/t^2"""
    t = coerce_real(t, prec)
    inverse = 1 / t.square()
    trivial = abs(sides.trivial_term)
    pole = abs(sides.pole_term)
    return {
        'trivial': ball_from_decimal(TRIVIAL_BOUND, prec) * inverse - trivial,
        'pole': ball_from_decimal(POLE_BOUND, prec) * inverse - pole,
        'combined': ball_from_decimal(SMALL_BOUND, prec) * inverse - trivial - pole,
    }
