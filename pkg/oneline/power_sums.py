"""
Exponential sums over integers with certified error bounds.

    S_j(sigma, t) = sum_{1 <= n < N} n^{-(sigma + it)} (-log n)^j / j!

are the Taylor coefficients of the partial zeta sum. Two engines compute
them:

  ball    mpmath arithmetic at a working precision well above `prec`,
          accumulated exactly in fixed point; per-term rounding is bounded
          a priori and added to the radius.
  vector  numpy float64 in chunks. The radius is an a-priori bound on the
          float error: at most ULP_BUDGET ulps per libm call, one rounding
          per arithmetic operation and the pairwise-summation bound of
          numpy.sum. Below 53 bits of requested precision the unit
          roundoff is raised to 2^(1-prec).

Both engines share the phase table n^{-it} across several sigmas, which is
what the log-zeta quadrature needs (one t, many abscissae).
"""

import logging
import math
from functools import lru_cache

import numpy as np
from mpmath.libmp import (
    fzero, fone, round_nearest, round_up,
    from_int, from_float, from_man_exp, to_float, to_fixed,
    mpf_add, mpf_sub, mpf_mul, mpf_div, mpf_neg, mpf_abs, mpf_exp, mpf_log,
    mpf_cos_sin, mpf_shift,
)

from .balls import RAD_PREC, BallComplex, BallReal
from .jets import Jet

logger = logging.getLogger(__name__)

CHUNK = 1 << 20

# Accuracy assumed for each numpy transcendental call (exp, log, cos, sin).
ULP_BUDGET = 4

SAFETY = 1.01
MAG_SAFETY = 1.0 + 1e-6

ENGINES = ('auto', 'ball', 'vector')


def unit_roundoff(prec):
    return max(2.0 ** -53, 2.0 ** (1 - prec))


def choose_engine(engine, n_terms, threshold):
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    if engine == 'auto':
        return 'ball' if n_terms <= threshold else 'vector'
    return engine


def _float_gap(value, approx):
    """|value - approx| rounded up to a float, value a raw mpf"""
    gap = mpf_abs(mpf_sub(value, from_float(approx), 53, round_up))
    return to_float(gap) * (1 + 2.0 ** -50)


def _exact_to_ball(exact, err, prec):
    mid = mpf_add(exact, fzero, prec, round_nearest)
    rounding = mpf_abs(mpf_sub(exact, mid, RAD_PREC, round_up))
    return BallReal(mid, mpf_add(err, rounding, RAD_PREC, round_up), prec)


def _integer_chunks(n_terms):
    start = 1
    while start < n_terms:
        stop = min(start + CHUNK, n_terms)
        yield np.log(np.arange(start, stop, dtype=np.float64)), None
        start = stop


@lru_cache(maxsize=16)
def magnitude_sum(n_terms, power, sigma=1.0):
    """Upper bound for sum_{1 <= n < N} n^{-sigma} (log n)^power / power!"""
    total = 0.0
    for logs, _ in _integer_chunks(n_terms):
        total += float(np.sum(np.exp(-sigma * logs) * logs ** power))
    return total / math.factorial(power) * MAG_SAFETY


def _magnitude_sums(sigmas_f, n_terms, kmax):
    out = [[0.0] * (kmax + 1) for _ in sigmas_f]
    for logs, _ in _integer_chunks(n_terms):
        for i, sigma in enumerate(sigmas_f):
            term = np.exp(-sigma * logs)
            for k in range(kmax + 1):
                out[i][k] += float(np.sum(term))
                term = term * logs / (k + 1)
    return [[value * MAG_SAFETY for value in row] for row in out]


def _vector_exp_sums(chunks, sigmas_f, t_f, order):
    """Exact accumulation of float64 chunk sums; magnitudes up to order + 1"""
    count = len(sigmas_f)
    re_sums = [[fzero] * (order + 1) for _ in range(count)]
    im_sums = [[fzero] * (order + 1) for _ in range(count)]
    mags = [[0.0] * (order + 2) for _ in range(count)]
    for logs, weights in chunks:
        cos = np.cos(t_f * logs)
        sin = np.sin(t_f * logs)
        powers = [np.ones_like(logs)]
        for j in range(1, order + 2):
            powers.append(powers[-1] * (-logs) / j)
        for i, sigma in enumerate(sigmas_f):
            amp = np.exp(-sigma * logs)
            if weights is not None:
                amp = amp * weights
            for j in range(order + 2):
                term = amp * powers[j]
                mags[i][j] += float(np.sum(np.abs(term)))
                if j <= order:
                    re_sums[i][j] = mpf_add(re_sums[i][j], from_float(float(np.sum(term * cos))))
                    im_sums[i][j] = mpf_add(im_sums[i][j], from_float(-float(np.sum(term * sin))))
    return re_sums, im_sums, [[m * MAG_SAFETY for m in row] for row in mags]


def _vector_error(j, mag, max_log, t_gap, s_gap, abs_t, abs_s, u, log_ulps, weight_ulps=0):
    phase = max_log * (t_gap + s_gap + (abs_t + abs_s) * (log_ulps + 1) * u)
    relative = phase + (2 * ULP_BUDGET + 6 + weight_ulps + j * (log_ulps + 2)) * u \
        + (math.log2(CHUNK) + 24) * u
    return from_float(SAFETY * relative * mag)


def _vector_engine(sigmas, t, n_terms, order, prec):
    u = unit_roundoff(prec)
    t_f = to_float(t.mid)
    sigmas_f = [to_float(s.mid) for s in sigmas]
    re_sums, im_sums, mags = _vector_exp_sums(_integer_chunks(n_terms), sigmas_f, t_f, order)
    max_log = math.log(max(n_terms, 2)) * (1 + 1e-12)
    t_gap = _float_gap(t.mid, t_f)
    jets = []
    for i, sigma in enumerate(sigmas):
        s_gap = _float_gap(sigma.mid, sigmas_f[i])
        coeffs = []
        for j in range(order + 1):
            err = _vector_error(j, mags[i][j], max_log, t_gap, s_gap,
                                abs(t_f), abs(sigmas_f[i]), u, ULP_BUDGET)
            coeffs.append(BallComplex(_exact_to_ball(re_sums[i][j], err, prec),
                                      _exact_to_ball(im_sums[i][j], err, prec)))
        jets.append((coeffs, mags[i]))
    return jets


@lru_cache(maxsize=4)
def _log_table(n_terms, wp):
    return (fzero, fzero) + tuple(mpf_log(from_int(n), wp, round_nearest) for n in range(2, n_terms))


def _ball_engine(sigmas, t, n_terms, order, prec):
    max_log = math.log(max(n_terms, 2))
    abs_t = abs(to_float(t.mid))
    abs_s = max(abs(to_float(s.mid)) for s in sigmas)
    scale = (abs_t + abs_s) * max_log
    wp = prec + 40 + int(scale + 1).bit_length()
    logs = _log_table(n_terms, wp)
    t_mid = t.mid
    sigma_mids = [s.mid for s in sigmas]
    one = 1 << wp
    acc_re = [[one] + [0] * order for _ in sigmas]
    acc_im = [[0] * (order + 1) for _ in sigmas]
    for n in range(2, n_terms):
        ln = logs[n]
        neg_ln = mpf_neg(ln)
        powers = [fone]
        for j in range(1, order + 1):
            powers.append(mpf_div(mpf_mul(powers[-1], neg_ln, wp), from_int(j), wp))
        cos, sin = mpf_cos_sin(mpf_mul(t_mid, ln, wp), wp)
        for i, sigma in enumerate(sigma_mids):
            amp = mpf_exp(mpf_neg(mpf_mul(sigma, ln, wp)), wp)
            re_part = mpf_mul(amp, cos, wp)
            im_part = mpf_neg(mpf_mul(amp, sin, wp))
            row_re = acc_re[i]
            row_im = acc_im[i]
            for j in range(order + 1):
                row_re[j] += to_fixed(mpf_mul(re_part, powers[j], wp), wp)
                row_im[j] += to_fixed(mpf_mul(im_part, powers[j], wp), wp)
    mags = _magnitude_sums([to_float(s) for s in sigma_mids], n_terms, order + 1)
    jets = []
    for i in range(len(sigmas)):
        coeffs = []
        for j in range(order + 1):
            rel = 8 * scale + 24 + 6 * j
            err = mpf_shift(from_float((rel * mags[i][j] + n_terms) * SAFETY), -wp)
            re_ball = _exact_to_ball(from_man_exp(acc_re[i][j], -wp), err, prec)
            im_ball = _exact_to_ball(from_man_exp(acc_im[i][j], -wp), err, prec)
            coeffs.append(BallComplex(re_ball, im_ball))
        jets.append((coeffs, mags[i]))
    return jets


def power_sum_jets(sigmas, t, n_terms, order, prec, engine='auto', threshold=20_000):
    """
    Jets of sum_{1 <= n < N} n^{-s} at s = sigma + it for each sigma.

    The radii of the sigma and t balls are propagated with the bound
    |n^{-s} - n^{-s0}| <= n^{-sigma0}·rho·log n·exp(rho·log n), rho the
    combined input radius.
    """
    engine = choose_engine(engine, n_terms, threshold)
    logger.debug("power sum: N=%d order=%d engine=%s sigmas=%d", n_terms, order, engine, len(sigmas))
    if engine == 'ball':
        raw = _ball_engine(sigmas, t, n_terms, order, prec)
    else:
        raw = _vector_engine(sigmas, t, n_terms, order, prec)
    max_log = math.log(max(n_terms, 2))
    out = []
    for sigma, (coeffs, mags) in zip(sigmas, raw):
        rho = mpf_add(sigma.rad, t.rad, RAD_PREC, round_up)
        if rho != fzero:
            growth = math.exp(to_float(rho) * max_log) * (1 + 1e-9)
            coeffs = [
                c.add_error(mpf_mul(rho, from_float(growth * (j + 1) * mags[j + 1]), RAD_PREC, round_up))
                for j, c in enumerate(coeffs)
            ]
        out.append(Jet(coeffs))
    return out


def vector_dirichlet_sum(weights, logs, sigma, t, prec, log_ulps=ULP_BUDGET + 1, weight_ulps=1):
    """
    sum_n weights_n · exp(-(sigma + it)·logs_n) for float64 arrays.

    `logs` must be within `log_ulps` ulps of the exact logarithms and the
    weights within `weight_ulps` ulps of the exact weights.
    """
    u = unit_roundoff(prec)
    t_f = to_float(t.mid)
    sigma_f = to_float(sigma.mid)
    chunks = ((logs[i:i + CHUNK], weights[i:i + CHUNK]) for i in range(0, len(logs), CHUNK))
    re_sums, im_sums, mags = _vector_exp_sums(chunks, [sigma_f], t_f, 0)
    max_log = float(np.max(logs)) * (1 + 1e-12) if len(logs) else 0.0
    err = _vector_error(0, mags[0][0], max_log, _float_gap(t.mid, t_f), _float_gap(sigma.mid, sigma_f),
                        abs(t_f), abs(sigma_f), u, log_ulps + 1, weight_ulps)
    value = BallComplex(_exact_to_ball(re_sums[0][0], err, prec), _exact_to_ball(im_sums[0][0], err, prec))
    rho = mpf_add(sigma.rad, t.rad, RAD_PREC, round_up)
    if rho != fzero:
        growth = math.exp(to_float(rho) * max_log) * (1 + 1e-9)
        value = value.add_error(mpf_mul(rho, from_float(growth * mags[0][1]), RAD_PREC, round_up))
    return value
