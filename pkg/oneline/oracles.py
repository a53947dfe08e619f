"""
Independent enclosures used to cross-check the main evaluators.

None of these share code paths with zeta_eval: the alternating series for
eta(s) replaces Euler-Maclaurin, the Dirichlet series for zeta'/zeta is
summed from the sieve, digamma uses its Stirling series with Bernoulli
terms after an upward shift, pi comes from Machin's formula and prime sums
are recounted by trial division.
"""

import math
from fractions import Fraction
from math import isqrt

import numpy as np
from mpmath.libmp import from_man_exp, round_ceiling, to_float
from mpmath.libmp.gammazeta import bernfrac

from .balls import (
    DEFAULT_PREC, BallComplex, BallReal, ball_from_int, ball_from_rational, coerce_real, fixed_to_ball, pi,
)
from .exceptions import ArgumentError, DomainError
from .power_sums import vector_dirichlet_sum
from .prime_sums import cached_table

# 3 + sqrt(8), the convergence ratio of the alternating series
BORWEIN_RATIO = 3 + math.sqrt(8)

DIRICHLET_TERMS = 100_000

STIRLING_SHIFT = 16
STIRLING_TERMS = 8


def _borwein_coefficients(n):
    """d_0..d_n of the alternating-series acceleration, as exact rationals"""
    coeffs = []
    total = Fraction(0)
    for i in range(n + 1):
        total += Fraction(n * math.factorial(n + i - 1) * 4 ** i, math.factorial(n - i) * math.factorial(2 * i))
        coeffs.append(total)
    return coeffs


def _borwein_terms(t_max, prec):
    """Number of terms n with 3(1+2|t|)e^{|t|pi/2} (3+sqrt 8)^-n below 2^-prec"""
    needed = prec * math.log(2) + t_max * math.pi / 2 + math.log(3 * (1 + 2 * t_max))
    return max(int(needed / math.log(BORWEIN_RATIO)) + 2, 4)


def _borwein_error(t_abs, n, prec):
    """3(1 + 2|t|) e^{|t| pi/2} (3 + sqrt 8)^-n as an upper bound"""
    wp = prec + 16
    height = coerce_real(t_abs, wp)
    growth = (height * pi(wp) / 2).exp()
    ratio = (ball_from_int(3, wp) + ball_from_int(8, wp).sqrt()).log()
    decay = (-(ratio * n)).exp()
    return (3 * (1 + 2 * height) * growth * decay).upper()


def borwein_eta_jet(s, prec=DEFAULT_PREC):
    """
    (eta(s), eta'(s)) for Re s >= 3/4 from the accelerated alternating series

        eta(s) = -1/d_n sum_{k<n} (-1)^k (d_k - d_n) (k+1)^-s + e_n(s),
        |e_n(s)| <= 3(1 + 2|t|) e^{|t| pi/2} (3 + sqrt 8)^-n   (Re s >= 1/2).

    The derivative error comes from a Cauchy estimate on a circle of radius 1/4.
    """
    s = BallComplex.coerce(s, prec)
    if not (s.re - Fraction(3, 4)).is_nonnegative():
        raise ArgumentError("the alternating-series oracle needs Re s >= 3/4")
    t_abs = to_float(abs(s.im).upper(), rnd=round_ceiling)
    n = _borwein_terms(t_abs + 0.25, prec)
    # cancellation among the terms costs about |t| pi/2 nats
    wp = prec + int(t_abs * math.pi / 2 / math.log(2)) + 64
    s_wp = BallComplex(s.re.with_prec(wp), s.im.with_prec(wp))
    d = _borwein_coefficients(n)
    d_n = d[n]
    value = BallComplex.from_real(0, wp)
    derivative = BallComplex.from_real(0, wp)
    for k in range(n):
        log_k = ball_from_int(k + 1, wp).log()
        power = (-(s_wp * log_k)).exp()
        ratio = (d[k] - d_n) / d_n
        weight = ball_from_rational((-1) ** k * ratio.numerator, ratio.denominator, wp)
        value = value - power * weight
        derivative = derivative + power * (log_k * weight)
    value = value.add_error(_borwein_error(t_abs, n, prec))
    on_circle = BallReal.exact(_borwein_error(t_abs + 0.25, n, prec), prec)
    derivative = derivative.add_error((on_circle * 4).upper())
    return value, derivative


def borwein_zeta(s, prec=DEFAULT_PREC):
    """(zeta(s), zeta'(s)) through zeta = eta/(1 - 2^{1-s})"""
    s = BallComplex.coerce(s, prec)
    eta, eta_prime = borwein_eta_jet(s, prec)
    wp = eta.prec
    log_two = ball_from_int(2, wp).log()
    factor = ((1 - s) * log_two).exp()
    denominator = 1 - factor
    if denominator.contains_zero():
        raise DomainError('zeta', '1 - 2^(1-s) vanishes on the ball')
    value = eta / denominator
    derivative = eta_prime / denominator - eta * factor * log_two / (denominator * denominator)
    return value, derivative


def dirichlet_logderiv(s, terms=DIRICHLET_TERMS, prec=DEFAULT_PREC):
    """
    zeta'/zeta(s) = -sum_n Lambda(n) n^-s for Re s > 1, summed to M = terms with

        |sum_{n>M} Lambda(n) n^-sigma| <= M^{1-sigma} (log M/(sigma-1) + 1/(sigma-1)^2).
    """
    s = BallComplex.coerce(s, prec)
    sigma_low = s.re.lower()
    excess = BallReal.exact(sigma_low, prec) - 1
    if not (excess - Fraction(1, 2)).is_positive():
        raise ArgumentError("the Dirichlet-series oracle needs Re s > 3/2")
    table = cached_table(terms)
    logs = table.exponents * _float_logs(table.bases)
    weights = _float_logs(table.bases)
    total = vector_dirichlet_sum(weights, logs, s.re, s.im, prec)
    log_m = ball_from_int(terms, prec).log()
    tail = ((-excess) * log_m).exp() * (log_m / excess + 1 / excess.square())
    return (-total).add_error(tail.upper())


def _float_logs(values):
    return np.log(values.astype(np.float64))


def stirling_digamma(z, prec=DEFAULT_PREC, shift=STIRLING_SHIFT, terms=STIRLING_TERMS):
    """
    psi(z) = psi(z + m) - sum_{k<m} 1/(z + k), with

        psi(w) = log w - 1/(2w) - sum_{k=1}^K B_2k/(2k w^2k) + R,
        |R| <= 2^{K+1} |B_{2K+2}| / ((2K+2) |w|^{2K+2})   (Re w > 0).
    """
    z = BallComplex.coerce(z, prec)
    if not (z.re + shift).is_positive():
        raise ArgumentError("shift too small for this argument")
    correction = BallComplex.from_real(0, prec)
    w = z
    for _ in range(shift):
        if w.contains_zero():
            raise DomainError('digamma', 'ball contains a non-positive integer')
        correction = correction + 1 / w
        w = w + 1
    inverse_square = 1 / (w * w)
    value = w.log() - 1 / (2 * w)
    power = inverse_square
    for k in range(1, terms + 1):
        p, q = bernfrac(2 * k)
        value = value - power * ball_from_rational(p, 2 * k * q, prec)
        power = power * inverse_square
    p, q = bernfrac(2 * terms + 2)
    bound = ball_from_rational(abs(p) * 2 ** (terms + 1), (2 * terms + 2) * q, prec) \
        / w.norm_squared().pow(terms + 1)
    return (value - correction).add_error(bound.upper())


def _atan_inverse(m, wp):
    """Fixed-point atan(1/m)·2^wp and the number of truncated terms"""
    scale = 1 << wp
    power = scale // m
    total = 0
    k = 0
    m2 = m * m
    while power:
        term = power // (2 * k + 1)
        total += -term if k % 2 else term
        power //= m2
        k += 1
    return total, k


def machin_pi(prec=DEFAULT_PREC):
    """pi = 16 atan(1/5) - 4 atan(1/239) in fixed point"""
    wp = prec + 32
    a, terms_a = _atan_inverse(5, wp)
    b, terms_b = _atan_inverse(239, wp)
    # every floored division loses less than one unit; the alternating tail is below one unit
    err = from_man_exp(16 * (2 * terms_a + 2) + 4 * (2 * terms_b + 2), -wp)
    return fixed_to_ball(16 * a - 4 * b, wp, err, prec)


def prime_power_base(n):
    """p when n = p^k, otherwise None; trial division"""
    if n < 2:
        return None
    for p in range(2, isqrt(n) + 1):
        if n % p == 0:
            while n % p == 0:
                n //= p
            return p if n == 1 else None
    return n


def direct_weighted_sum(x, alpha, beta, prec=DEFAULT_PREC):
    """sum_{n <= x} Lambda(n)/(n^alpha (log n)^beta) by enumerating n"""
    alpha = coerce_real(alpha, prec)
    total = ball_from_int(0, prec)
    for n in range(2, int(x) + 1):
        p = prime_power_base(n)
        if p is None:
            continue
        log_n = ball_from_int(n, prec).log()
        term = (-(alpha * log_n)).exp()
        if beta == 0:
            term = term * ball_from_int(p, prec).log()
        else:
            term = term * ball_from_int(p, prec).log() / log_n
        total = total + term
    return total
