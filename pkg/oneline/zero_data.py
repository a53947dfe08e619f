"""
Tables of nontrivial-zero ordinates and the sums over them.

Only positive ordinates are stored; every sum below adds the conjugate
zero 1/2 - i·gamma explicitly. Ordinates are kept as their decimal text
(exact) plus a float64 copy for vectorised sums; a per-file accuracy
radius covers the rounding of the published values.

Large ranges are summed in float64 with a first-order error bound: a
term f(d) of the distance d = t -/+ gamma moves by at most
|f'(d)|·Delta when d is only known to within Delta, and both kernels
used here satisfy |f'| <= f·c/|d| or |f'| <= f/a.
"""

import logging
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import mpmath
import numpy as np
from mpmath.libmp import from_float, round_ceiling, round_floor, to_float

from .balls import (
    DEFAULT_PREC, BallComplex, BallReal, as_fraction, ball_from_decimal, ball_from_int,
    ball_from_rational, coerce_real, parse_decimal, pi,
)
from .conf import setting
from .exceptions import (
    ArgumentError, CoverageError, ParseError, ProximityError, ZeroFormatError,
)
from .zeta_eval import EvalConfig, digamma, log_deriv

logger = logging.getLogger(__name__)

ORDINATE_PREC = 96
FIRST_ORDINATE_FLOOR = 14

# Riemann-von Mangoldt sanity envelope: |N(H) - main(H)| <= 0.15 log H + 3.
RVM_SLOPE = 0.15
RVM_CONSTANT = 3.0
RVM_GRID = 64

PROXIMITY = Fraction(1, 1000)

# Lower edge of the range where the tail estimate is quoted.
TAIL_GATE = 10 ** 9

# Ranges up to this many ordinates are summed in ball arithmetic.
BALL_TERMS = 2000

FORMATS = ('auto', 'plain', 'commented')

UNIT = 2.0 ** -53


@dataclass(frozen=True, eq=False)
class ZeroTable:
    texts: tuple
    heights: np.ndarray
    source: str
    claimed_complete_to: Fraction
    accuracy: Fraction

    def __len__(self):
        return len(self.texts)

    @cached_property
    def gamma_max(self):
        return parse_decimal(self.texts[-1])

    def count_upto(self, height):
        """Number of tabulated ordinates <= height"""
        height = as_fraction(height)
        index = int(np.searchsorted(self.heights, float(height), side='right'))
        # float ties are settled on the exact decimal values
        while index > 0 and parse_decimal(self.texts[index - 1]) > height:
            index -= 1
        while index < len(self.texts) and parse_decimal(self.texts[index]) <= height:
            index += 1
        return index

    def ordinate(self, index, prec=ORDINATE_PREC):
        """Ball for the index-th ordinate, widened by the table accuracy"""
        ball = ball_from_decimal(self.texts[index], prec)
        return ball.add_error(ball_from_rational(self.accuracy.numerator, self.accuracy.denominator, 30).upper())

    def truncated(self, count):
        """Copy restricted to the first `count` ordinates, complete to the last kept one"""
        if not 0 < count <= len(self):
            raise ArgumentError(f"cannot keep {count} of {len(self)} ordinates")
        complete_to = min(self.claimed_complete_to, parse_decimal(self.texts[count - 1]))
        return ZeroTable(self.texts[:count], self.heights[:count], self.source, complete_to, self.accuracy)


def _parse_header(line, number, headers):
    body = line.lstrip('#').strip()
    if ':' not in body:
        return
    key, _, value = body.partition(':')
    key = key.strip().lower()
    value = value.strip()
    if key == 'source':
        headers['source'] = value
    elif key in ('complete_to', 'accuracy'):
        try:
            headers[key] = parse_decimal(value)
        except ParseError as exc:
            raise ZeroFormatError(f"bad {key} header: {exc}", number) from exc


def parse_zero_lines(lines, format='auto', accuracy=None, source=None):
    """Validate ordinate lines; see load_zeros"""
    if format not in FORMATS:
        raise ArgumentError(f"unknown zero-file format {format!r}")
    headers = {}
    texts = []
    values = []
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith('#'):
            if format == 'plain':
                raise ZeroFormatError("comment line in a plain zero file", number)
            _parse_header(line, number, headers)
            continue
        try:
            value = parse_decimal(line)
        except ParseError as exc:
            raise ZeroFormatError(f"unparsable ordinate {line!r}", number) from exc
        if not values and value <= FIRST_ORDINATE_FLOOR:
            raise ZeroFormatError(f"first ordinate {line} is not above {FIRST_ORDINATE_FLOOR}", number)
        if values and value <= values[-1]:
            raise ZeroFormatError(f"ordinate {line} does not increase", number)
        texts.append(line)
        values.append(value)
    if not texts:
        raise ZeroFormatError("no ordinates found")
    gamma_max = values[-1]
    complete_to = headers.get('complete_to', gamma_max)
    if complete_to > gamma_max:
        raise ZeroFormatError(f"complete_to {float(complete_to):g} exceeds the last ordinate {float(gamma_max):g}")
    if accuracy is None:
        accuracy = headers.get('accuracy', parse_decimal(str(setting('ONELINE_ZERO_ACCURACY'))))
    table = ZeroTable(
        texts=tuple(texts),
        heights=np.array([float(v) for v in values], dtype=np.float64),
        source=headers.get('source', source or ''),
        claimed_complete_to=complete_to,
        accuracy=as_fraction(accuracy),
    )
    _check_counts(table)
    return table


def load_zeros(path, format='auto', accuracy=None):
    """
    Read a zero file: one decimal ordinate per line, strictly increasing,
    optionally preceded by '# source:', '# complete_to:' and '# accuracy:'
    headers (commented format).
    """
    path = Path(path)
    with path.open(encoding='utf-8') as handle:
        table = parse_zero_lines(handle, format, accuracy, source=str(path))
    logger.info("Loaded %d ordinates from %s (complete to %s)", len(table), path, float(table.claimed_complete_to))
    return table


def rvm_main_term(height):
    height = np.asarray(height, dtype=np.float64)
    scaled = height / (2 * np.pi)
    return scaled * np.log(scaled / np.e) + 7 / 8


def rvm_slack(height):
    return RVM_SLOPE * np.log(np.asarray(height, dtype=np.float64)) + RVM_CONSTANT


def rvm_grid(table, points=RVM_GRID):
    top = float(table.claimed_complete_to)
    return np.linspace(min(FIRST_ORDINATE_FLOOR, top), top, points)


def rvm_residuals(table, grid=None):
    """N(H) - main term for H on the grid"""
    grid = rvm_grid(table) if grid is None else np.asarray(grid, dtype=np.float64)
    counts = np.searchsorted(table.heights, grid, side='right')
    return counts - rvm_main_term(grid)


def _check_counts(table):
    grid = rvm_grid(table)
    residuals = rvm_residuals(table, grid)
    bad = np.flatnonzero(np.abs(residuals) > rvm_slack(grid))
    if len(bad):
        height = grid[bad[0]]
        raise ZeroFormatError(
            f"zero count {residuals[bad[0]]:+.2f} away from the Riemann-von Mangoldt main term at "
            f"H={height:.6g}; the table looks corrupted or incomplete"
        )


def _certified_sum(terms, errors, prec):
    """Ball around fsum(terms) widened by sum(errors) and the rounding of the sum"""
    total = math.fsum(terms)
    err = math.fsum(errors) * (1 + 1e-9) + abs(total) * 2 * UNIT + 1e-300
    return BallReal(from_float(total), from_float(err), prec)


def _distance_slack(table, t_f, t_gap):
    """Bound for the error in t -/+ gamma computed in float64"""
    top = max(abs(t_f), float(table.heights[-1]))
    return float(table.accuracy) * (1 + 1e-9) + t_gap + 4 * top * UNIT


def _float_gap(ball):
    mid = ball.to_float()
    exact_gap = abs(ball - BallReal.exact(from_float(mid), ball.prec))
    return to_float(exact_gap.upper(), rnd=round_ceiling) * (1 + 1e-12), mid


def _ordinate_range(table, lower, upper):
    """Index range of ordinates with lower < gamma <= upper"""
    start = table.count_upto(lower) if lower is not None else 0
    return start, table.count_upto(upper)


def _check_height(table, T):
    T = as_fraction(T)
    if T > table.claimed_complete_to:
        raise CoverageError(
            f"T={float(T):g} is beyond the height {float(table.claimed_complete_to):g} the table is complete to",
            required=T,
        )
    return T


def partial_zero_sum(table, alpha, t, T, prec=DEFAULT_PREC):
    """
    sum_{|gamma| <= T} (alpha - 1/2)/((alpha - 1/2)^2 + (t - gamma)^2)
    over both signs of gamma.
    """
    T = _check_height(table, T)
    alpha = coerce_real(alpha, prec)
    t = coerce_real(t, prec)
    if t.is_negative():
        raise ArgumentError("t must be non-negative")
    a = alpha - ball_from_rational(1, 2, prec)
    if not a.is_positive():
        raise ArgumentError("alpha must exceed 1/2")
    stop = table.count_upto(T)
    if stop == 0:
        return ball_from_int(0, prec)
    if stop <= BALL_TERMS:
        total = ball_from_int(0, prec)
        a2 = a.square()
        for i in range(stop):
            gamma = table.ordinate(i, prec)
            total = total + a / (a2 + (t - gamma).square()) + a / (a2 + (t + gamma).square())
        return total
    t_gap, t_f = _float_gap(t)
    a_gap, a_f = _float_gap(a)
    gammas = table.heights[:stop]
    a2 = a_f * a_f
    terms = np.concatenate([a_f / (a2 + (t_f - gammas) ** 2), a_f / (a2 + (t_f + gammas) ** 2)])
    delta = _distance_slack(table, t_f, t_gap)
    # |df/dd| <= f/a and |df/da| <= f/a
    a_low = to_float(a.lower(), rnd=round_floor)
    relative = 1.25 * (delta + a_gap + to_float(a.rad, rnd=round_ceiling)) / a_low + 10 * UNIT
    return _certified_sum(terms, terms * relative, prec)


def tail_square_bound(T, allow_below_gate=False, prec=DEFAULT_PREC):
    """
    Upper bound for sum_{gamma > T} 1/gamma^2:
    (log(T/2pi) + 1)/(2pi T) + (0.14 + 0.56 log T)/T^2.
    """
    T = as_fraction(T)
    if T <= 0:
        raise ArgumentError("tail bound needs T > 0")
    if T < TAIL_GATE:
        if not allow_below_gate:
            raise ArgumentError(f"tail bound is quoted for T >= 1e9, got {float(T):g}; override to use it below")
        logger.warning("Tail bound used below its quoted range at T=%g", float(T))
    height = ball_from_rational(T.numerator, T.denominator, prec)
    two_pi = 2 * pi(prec)
    log_t = height.log()
    main = ((height / two_pi).log() + 1) / (two_pi * height)
    correction = (ball_from_rational(14, 100, prec) + ball_from_rational(56, 100, prec) * log_t) / height.square()
    return main + correction


def tail_envelope_check(T, prec=DEFAULT_PREC):
    """Margin log T/(2pi T) - tail_square_bound(T), for T >= 1e9"""
    T = as_fraction(T)
    height = ball_from_rational(T.numerator, T.denominator, prec)
    return height.log() / (2 * pi(prec) * height) - tail_square_bound(T, prec=prec)


def check_proximity(table, t):
    t = as_fraction(t)
    index = int(np.searchsorted(table.heights, float(t)))
    for j in (index - 1, index):
        if 0 <= j < len(table):
            gap = abs(parse_decimal(table.texts[j]) - t)
            if gap < PROXIMITY + table.accuracy:
                raise ProximityError(
                    f"t={float(t):.9g} lies within {float(PROXIMITY):g} of the ordinate {table.texts[j]}"
                )


def _inverse_square_sum(table, t, start, stop, prec):
    """sum over ordinates start..stop-1 of 1/(gamma - t)^2 + 1/(gamma + t)^2"""
    if stop <= start:
        return ball_from_int(0, prec)
    if stop - start <= BALL_TERMS:
        total = ball_from_int(0, prec)
        for i in range(start, stop):
            gamma = table.ordinate(i, prec)
            total = total + 1 / (gamma - t).square() + 1 / (gamma + t).square()
        return total
    t_gap, t_f = _float_gap(t)
    gammas = table.heights[start:stop]
    near = np.abs(gammas - t_f)
    delta = _distance_slack(table, t_f, t_gap)
    distances = np.concatenate([near, gammas + t_f])
    if distances.min() < 5 * delta:
        closest = start + int(np.argmin(near))
        raise ProximityError(
            f"t={t_f:.12g} is within {5 * delta:.3g} of the ordinate {table.texts[closest]}; "
            "the float64 sum cannot bound that term"
        )
    terms = 1 / distances ** 2
    # f = d^-2 gives |df| <= f·2·Delta/(d - Delta)·d/(d - Delta), and d/(d - Delta) <= 1.25 for d >= 5·Delta
    errors = terms * (2.5 * delta / (distances - delta)) + terms * 10 * UNIT
    return _certified_sum(terms, errors, prec)


def envelope_factor(t, split, prec=DEFAULT_PREC):
    """1/delta_eff^2 + 1 with delta_eff = 1 - t/split"""
    split_ball = ball_from_rational(split.numerator, split.denominator, prec)
    delta = 1 - coerce_real(t, prec) / split_ball
    if not delta.is_positive():
        raise CoverageError(f"t must stay below {float(split):g}", required=split)
    return 1 / delta.square() + 1


def e_enclosure(table, t, T, prec=DEFAULT_PREC):
    """
    (lower, upper) for E(t, T) = sum_{|gamma| > T} 1/(gamma - t)^2.

    lower: tabulated ordinates in (T, gamma_max]. upper: tabulated
    ordinates in (T, G] plus (1/delta^2 + 1)·tail_square_bound(G) for the
    rest, G = max(T, claimed_complete_to) and delta = 1 - t/G.
    """
    T = as_fraction(T)
    t_value = as_fraction(t)
    if t_value < 0:
        raise ArgumentError("t must be non-negative")
    split = max(T, table.claimed_complete_to)
    if t_value >= split:
        raise CoverageError(f"t={float(t_value):g} is not below the complete height {float(split):g}",
                            required=t_value)
    check_proximity(table, t_value)
    t_ball = ball_from_rational(t_value.numerator, t_value.denominator, prec)
    start = table.count_upto(T)
    complete = table.count_upto(split)
    lower_part = _inverse_square_sum(table, t_ball, start, complete, prec)
    beyond = _inverse_square_sum(table, t_ball, complete, len(table), prec)
    tail = envelope_factor(t_value, split, prec) * tail_square_bound(split, allow_below_gate=True, prec=prec)
    lower = lower_part + beyond
    upper = lower_part + tail
    return lower, upper


def e_split_check(table, t, T, delta):
    """
    (gamma - t)^2 >= delta^2 gamma^2 and (gamma + t)^2 >= gamma^2 for every
    tabulated gamma > T, given 0 <= t <= (1 - delta) T. Exact rational
    comparisons; returns the index of the first failure or None.
    """
    t, T, delta = as_fraction(t), as_fraction(T), as_fraction(delta)
    if not (0 < delta < 1):
        raise ArgumentError("delta must lie in (0, 1)")
    if t < 0 or t > (1 - delta) * T:
        raise ArgumentError("the split needs 0 <= t <= (1 - delta) T")
    for i in range(table.count_upto(T), len(table)):
        gamma = parse_decimal(table.texts[i])
        if (gamma - t) ** 2 < delta ** 2 * gamma ** 2 or (gamma + t) ** 2 < gamma ** 2:
            return i
    return None


def zero_sum_digamma_step(alpha, t, prec=DEFAULT_PREC):
    """
    Margin of (log t)/2 >= Re psi(s/2 + 1)/2 - (log pi)/2 + (alpha - 1)/((alpha - 1)^2 + t^2),
    s = alpha + it.
    """
    alpha = coerce_real(alpha, prec)
    t = coerce_real(t, prec)
    half = ball_from_rational(1, 2, prec)
    z = BallComplex(alpha * half + 1, t * half)
    shifted = alpha - 1
    pole = shifted / (shifted.square() + t.square())
    right = digamma(z).re * half - pi(prec).log() * half + pole
    return t.log() * half - right


def zero_sum_inequality_check(table, alpha, t, T, cfg=None, relaxed=False):
    """
    Margin Re zeta'/zeta(alpha + it) + (log t)/2 - partial_zero_sum(alpha, t, T).
    The inequality is stated for t >= 1e6; `relaxed` allows smaller t as an
    observation.
    """
    cfg = cfg or EvalConfig.from_settings()
    prec = cfg.prec
    t = coerce_real(t, prec)
    if not relaxed and t.to_float() < 1e6:
        raise ArgumentError("the zero-sum inequality is stated for t >= 1e6; use relaxed mode below")
    if relaxed and t.to_float() < 1e6:
        logger.warning("Zero-sum inequality checked at t=%s below 1e6 (observational)", t.to_text(10))
    alpha = coerce_real(alpha, prec)
    value = log_deriv(BallComplex(alpha, t), cfg).re
    zeros = partial_zero_sum(table, alpha, t, T, prec)
    return value + t.log() * ball_from_rational(1, 2, prec) - zeros


def write_zero_file(path, texts, source, complete_to=None, accuracy=None, extra=None):
    """Write ordinates in the commented format via a temporary file"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    temp = path.with_name(path.name + '.part')
    try:
        with temp.open('w', encoding='utf-8') as handle:
            handle.write(f"# source: {source}\n")
            for key, value in (extra or {}).items():
                handle.write(f"# {key}: {value}\n")
            handle.write(f"# complete_to: {complete_to or texts[-1]}\n")
            if accuracy is not None:
                handle.write(f"# accuracy: {accuracy}\n")
            for text in texts:
                handle.write(f"{text}\n")
        os.replace(temp, path)
    finally:
        if temp.exists():
            temp.unlink()
    return path


def generate_zeros(count, out, dps=25):
    """First `count` ordinates from mpmath.zetazero, commented format"""
    if count < 1:
        raise ArgumentError("count must be positive")
    texts = []
    with mpmath.workdps(dps):
        for n in range(1, count + 1):
            texts.append(mpmath.nstr(mpmath.zetazero(n).imag, dps - 5, min_fixed=-1, max_fixed=30))
    logger.info("Generated %d ordinates up to %s", count, texts[-1])
    return write_zero_file(out, texts, source='mpmath.zetazero', accuracy=f"1e-{dps - 10}")
