"""
Von Mangoldt sieve and the weighted prime sums

    sum_{n <= x} Lambda(n) / (n^alpha (log n)^beta),   beta in {0, 1},

with the two literature inequalities they are checked against:

    ramare:  sum_{n <= X} Lambda(n)/n          <= log X - gamma + 1.3/log^2 X
    rosser:  sum_{n <= x} Lambda(n)/(n log n)  <= log log x + gamma + 1/log^2 x
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import floor, isqrt

import mpmath
import numpy as np
from mpmath.libmp import fone

from .balls import (
    DEFAULT_PREC, as_fraction, ball_from_int, ball_from_rational, certified_sign, coerce_real,
    euler_gamma, parse_decimal,
)
from .exceptions import ArgumentError, CoverageError
from .power_sums import ULP_BUDGET, vector_dirichlet_sum

logger = logging.getLogger(__name__)

# Ranges with more prime powers than this go through the float64 engine.
BALL_TERMS = 5000

REFERENCE_BOUNDS = ('ramare', 'rosser')


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """Prime powers n = p^k <= limit, sorted by n, as three parallel arrays"""

    limit: int
    powers: np.ndarray
    bases: np.ndarray
    exponents: np.ndarray

    def __len__(self):
        return len(self.powers)

    def count_upto(self, x):
        return int(np.searchsorted(self.powers, x, side='right'))

    def factor(self, n):
        """(p, k) with n = p^k, or None when n is not a prime power"""
        if n < 2 or n > self.limit:
            if n > self.limit:
                raise CoverageError(f"n={n} beyond the sieve limit {self.limit}", required=n)
            return None
        index = int(np.searchsorted(self.powers, n))
        if index < len(self.powers) and self.powers[index] == n:
            return int(self.bases[index]), int(self.exponents[index])
        return None

    def mangoldt(self, n, prec=DEFAULT_PREC):
        """Lambda(n) as a ball"""
        factor = self.factor(n)
        if factor is None:
            return ball_from_int(0, prec)
        return log_prime(factor[0], prec)


@lru_cache(maxsize=4096)
def log_prime(p, prec):
    return ball_from_int(p, prec).log()


def sieve_mangoldt(limit):
    """Smallest-prime-factor sieve, then the prime powers up to limit"""
    if limit < 2:
        raise ArgumentError(f"sieve limit must be at least 2, got {limit}")
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    primes = np.flatnonzero(spf[2:] == 0).astype(np.int64) + 2
    powers = [primes]
    bases = [primes]
    exponents = [np.ones_like(primes)]
    small = primes[primes <= isqrt(limit)]
    k = 2
    current = small * small
    while len(small):
        keep = current <= limit
        small = small[keep]
        current = current[keep]
        if not len(small):
            break
        powers.append(current)
        bases.append(small)
        exponents.append(np.full_like(small, k))
        current = current * small
        k += 1
    powers = np.concatenate(powers)
    order = np.argsort(powers, kind='stable')
    table = PrimeTable(limit, powers[order], np.concatenate(bases)[order], np.concatenate(exponents)[order])
    logger.info("Sieved %d prime powers up to %d", len(table), limit)
    return table


@lru_cache(maxsize=4)
def cached_table(limit):
    return sieve_mangoldt(limit)


def _cutoff(table, x):
    x = as_fraction(x)
    cutoff = floor(x)
    if cutoff > table.limit:
        raise CoverageError(
            f"sums up to x={float(x):g} need a sieve of size {cutoff}, table stops at {table.limit}",
            required=cutoff,
        )
    return x, cutoff


def _range_sum(table, lo, hi, alpha, beta, prec):
    """sum over table entries lo..hi-1 of Lambda(n)/(n^alpha (log n)^beta)"""
    if hi <= lo:
        return ball_from_int(0, prec)
    bases = table.bases[lo:hi]
    exponents = table.exponents[lo:hi]
    if hi - lo <= BALL_TERMS:
        harmonic = alpha.is_exact() and alpha.mid == fone
        total = ball_from_int(0, prec)
        for p, k, n in zip(bases.tolist(), exponents.tolist(), table.powers[lo:hi].tolist()):
            if harmonic:
                decay = ball_from_rational(1, n, prec)
            else:
                decay = (-(alpha * (log_prime(p, prec) * k))).exp()
            if beta == 0:
                total = total + log_prime(p, prec) * decay
            else:
                total = total + decay / k
        return total
    logs = exponents * np.log(bases.astype(np.float64))
    if beta == 0:
        weights, weight_ulps = np.log(bases.astype(np.float64)), ULP_BUDGET
    else:
        weights, weight_ulps = 1.0 / exponents.astype(np.float64), 1
    value = vector_dirichlet_sum(weights, logs, alpha, ball_from_int(0, prec), prec,
                                 log_ulps=ULP_BUDGET + 1, weight_ulps=weight_ulps)
    return value.re


def _check_beta(beta):
    if beta not in (0, 1):
        raise ArgumentError(f"beta must be 0 or 1, got {beta}")


def weighted_sum(table, x, alpha, beta, prec=DEFAULT_PREC):
    """sum_{n <= x} Lambda(n) / (n^alpha (log n)^beta)"""
    _check_beta(beta)
    alpha = coerce_real(alpha, prec)
    if not alpha.is_nonnegative():
        raise ArgumentError("alpha must be non-negative")
    x, cutoff = _cutoff(table, x)
    if x < 2:
        raise ArgumentError(f"prime sums need x >= 2, got {float(x):g}")
    return _range_sum(table, 0, table.count_upto(cutoff), alpha, beta, prec)


def chebyshev_psi(table, x, prec=DEFAULT_PREC):
    """psi(x) = sum_{n <= x} Lambda(n)"""
    _, cutoff = _cutoff(table, x)
    return _range_sum(table, 0, table.count_upto(cutoff), ball_from_int(0, prec), 0, prec)


def prefix_sums(table, checkpoints, alpha, beta, prec=DEFAULT_PREC):
    """weighted_sum at every checkpoint, accumulated in one pass over the table"""
    _check_beta(beta)
    alpha = coerce_real(alpha, prec)
    cutoffs = [_cutoff(table, x)[1] for x in checkpoints]
    order = sorted(range(len(cutoffs)), key=cutoffs.__getitem__)
    results = [None] * len(cutoffs)
    total = ball_from_int(0, prec)
    start = 0
    for i in order:
        stop = table.count_upto(cutoffs[i])
        total = total + _range_sum(table, start, stop, alpha, beta, prec)
        start = max(start, stop)
        results[i] = total
    return results


def log_zeta_32_tail(x, prec=DEFAULT_PREC):
    """Upper bound 2/sqrt(floor x) for sum_{n > x} Lambda(n)/(n^{3/2} log n)"""
    cutoff = floor(as_fraction(x))
    if cutoff < 1:
        raise ArgumentError("tail bound needs x >= 1")
    return ball_from_rational(4, cutoff, prec).sqrt()


def reference_bound(x, which, prec=DEFAULT_PREC):
    """Right-hand side of the ramare or rosser inequality at x"""
    x = as_fraction(x)
    if x <= 1:
        raise ArgumentError("reference inequalities need x > 1")
    log_x = ball_from_rational(x.numerator, x.denominator, prec).log()
    gamma = euler_gamma(prec)
    if which == 'ramare':
        return log_x - gamma + ball_from_rational(13, 10, prec) / log_x.square()
    if which == 'rosser':
        return log_x.log() + gamma + 1 / log_x.square()
    raise ArgumentError(f"unknown reference inequality {which!r}; choose from {', '.join(REFERENCE_BOUNDS)}")


def reference_inequality_check(table, x, which, prec=DEFAULT_PREC):
    """Margin (literature bound) - (sieved sum); its certified sign decides the check"""
    bound = reference_bound(x, which, prec)
    x, cutoff = _cutoff(table, x)
    beta = 0 if which == 'ramare' else 1
    total = _range_sum(table, 0, table.count_upto(cutoff), ball_from_int(1, prec), beta, prec)
    margin = bound - total
    logger.debug("%s check at x=%s: margin %s", which, float(x), margin.to_text(8))
    return margin


def log_grid_points(x_max, start=10):
    """Heights 10^(k/2) from `start` up to x_max, as 15-digit decimal strings"""
    points = []
    with mpmath.workdps(40):
        k = 2 * int(round(mpmath.log10(start)))
        while True:
            text = mpmath.nstr(mpmath.power(10, mpmath.mpf(k) / 2), 15)
            if parse_decimal(text) > as_fraction(x_max):
                break
            points.append(text)
            k += 1
    return points


def reference_grid_check(table, x_max, which, prec=DEFAULT_PREC):
    """(x, margin, verdict) on the grid {10, 10^1.5, ...} up to x_max"""
    rows = []
    for text in log_grid_points(x_max):
        margin = reference_inequality_check(table, text, which, prec)
        rows.append((text, margin, certified_sign(margin)))
    return rows


def euler_product_check(table, x, prec=DEFAULT_PREC):
    """
    sum_{n <= x} Lambda(n)/(n log n) plus the deficit sum_{p <= x} sum_{p^k > x} 1/(k p^k)
    against sum_{p <= x} -log(1 - 1/p). Returns (left, right); both enclose the same number.
    """
    x, cutoff = _cutoff(table, x)
    count = table.count_upto(cutoff)
    left = _range_sum(table, 0, count, ball_from_int(1, prec), 1, prec)
    right = ball_from_int(0, prec)
    primes = table.bases[:count][table.exponents[:count] == 1].tolist()
    for p in primes:
        right = right - (1 - ball_from_rational(1, p, prec)).log()
        k = 1
        power = p
        while power <= cutoff:
            k += 1
            power *= p
        deficit = ball_from_int(0, prec)
        while power.bit_length() < prec + 16 + k.bit_length():
            deficit = deficit + ball_from_rational(1, k * power, prec)
            k += 1
            power *= p
        # sum_{j >= k} 1/(j p^j) <= 1/(k p^k) · p/(p-1)
        deficit = deficit.add_error(ball_from_rational(p, k * power * (p - 1), prec).upper())
        left = left + deficit
    return left, right
