"""
Certified values of zeta, its derivatives, log zeta(1+it) and digamma.

zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
          + sum_{k=1}^{M} B_2k/(2k)! · s(s+1)...(s+2k-2) · N^(1-s-2k) + R_M

with |R_M| <= |T_{M+1}|·|s+2M+1|/(sigma+2M+1). Derivatives come from the
same expansion differentiated term by term: the expansion is carried as a
Jet in h = s - s0, and the remainder's Taylor coefficients are bounded by
Cauchy estimates on a circle of radius min(1/log N, 1/4).
"""

import logging
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from mpmath.libmp import fzero, fone, from_int, from_float, mpf_lt, mpf_le, mpf_floor, to_int
from mpmath.libmp.gammazeta import bernfrac

from .balls import (
    DEFAULT_PREC, BallComplex, BallReal,
    ball_from_int, ball_from_rational, coerce_real, mpf_ceil_int,
)
from .conf import setting
from .exceptions import ArgumentError, ConfigurationError, PoleError, UndecidedError, VerificationError
from .jets import Jet, shifted_jet
from .prime_sums import cached_table, log_zeta_32_tail
from .power_sums import ENGINES, ULP_BUDGET, magnitude_sum, power_sum_jets, vector_dirichlet_sum
from .quadrature import ERROR_CONSTANTS, gauss_legendre, remainder_factor

logger = logging.getLogger(__name__)

# log zeta(1+it) is only evaluated at heights where the segment [1, 3/2] + it
# stays well away from the pole.
LOG_ZETA_MIN_T = 10

# Shifts applied by digamma before the asymptotic form is used.
DIGAMMA_RADIUS = 8
DIGAMMA_MAX_SHIFT = 100_000


@dataclass(frozen=True)
class EvalConfig:
    """Parameters of one evaluation; em_terms=None picks N from |s|"""

    prec: int = DEFAULT_PREC
    em_terms: int | None = None
    em_order: int = 12
    quad_nodes: int = 32
    quad_points: int = 2
    jet_order: int = 7
    engine: str = 'auto'
    vector_threshold: int = 20_000
    series_limit: int = 100_000
    t_ceiling: float = 1e7
    em_min_terms: int = 50

    def __post_init__(self):
        if self.prec < 8:
            raise ConfigurationError("precision must be at least 8 bits")
        if self.em_terms is not None and self.em_terms < 1:
            raise ConfigurationError("em_terms must be positive")
        if self.em_order < 1:
            raise ConfigurationError("em_order must be positive")
        if self.quad_nodes < 1:
            raise ConfigurationError("quad_nodes must be positive")
        if self.quad_points not in ERROR_CONSTANTS:
            raise ConfigurationError("quad_points must be 1, 2 or 3")
        if self.jet_order < 2 * self.quad_points + 2:
            raise ConfigurationError(
                f"jet_order {self.jet_order} too small for {self.quad_points}-point panels "
                f"(need at least {2 * self.quad_points + 2})"
            )
        if self.engine not in ENGINES:
            raise ConfigurationError(f"unknown power-sum engine {self.engine!r}")
        if self.series_limit < 2:
            raise ConfigurationError("series_limit must be at least 2")

    @classmethod
    def from_settings(cls, **overrides):
        """Configuration from Django settings (or built-in defaults), then overrides"""
        cfg = cls(
            prec=setting('ONELINE_PREC'),
            em_order=setting('ONELINE_EM_ORDER'),
            em_min_terms=setting('ONELINE_EM_MIN_TERMS'),
            quad_nodes=setting('ONELINE_QUAD_PANELS'),
            quad_points=setting('ONELINE_QUAD_POINTS'),
            jet_order=setting('ONELINE_JET_ORDER'),
            vector_threshold=setting('ONELINE_VECTOR_THRESHOLD'),
            series_limit=setting('ONELINE_SERIES_LIMIT'),
            t_ceiling=setting('ONELINE_T_CEILING'),
        )
        overrides = {k: v for k, v in overrides.items() if v is not None}
        return replace(cfg, **overrides) if overrides else cfg

    def terms_for(self, s):
        """Direct-sum length N for a point (or the largest point of a segment)"""
        needed = max(mpf_ceil_int(abs(s).upper()), 1)
        if self.em_terms is None:
            return max(needed, self.em_min_terms)
        if self.em_terms < needed:
            raise ConfigurationError(
                f"em_terms={self.em_terms} is below ceil(|s|)={needed}; the remainder bound would not hold"
            )
        return self.em_terms


@lru_cache(maxsize=64)
def bernoulli_coefficient(k, prec):
    """B_2k/(2k)!"""
    p, q = bernfrac(2 * k)
    return ball_from_rational(p, q * math.factorial(2 * k), prec)


def _check_point(s, cfg):
    if s.re.contains(1) and s.im.contains_zero():
        raise PoleError('zeta', 's ball contains the pole at 1')
    if mpf_lt(from_float(float(cfg.t_ceiling)), s.im.mag()):
        raise ConfigurationError(f"|Im s| beyond the supported ceiling {cfg.t_ceiling:g}")


def _remainder_bound(s, n_terms, em_order, radius, prec):
    """Bound for |R_M| over every point within `radius` of the s ball"""
    m = em_order
    sigma_low = coerce_real(s.re.lower(), prec) - radius
    denominator = sigma_low + (2 * m + 1)
    if not denominator.is_positive():
        raise ConfigurationError("Euler-Maclaurin remainder bound needs Re s > -(2M+1)")
    size = ball_from_int(1, prec)
    for j in range(2 * m + 2):
        size = size * (BallReal.exact(abs(s + j).upper(), prec) + radius)
    log_n = ball_from_int(n_terms, prec).log()
    decay = ((1 - sigma_low - (2 * m + 2)) * log_n).exp()
    value = abs(bernoulli_coefficient(m + 1, prec)) * decay * size / denominator
    return value.upper()


def em_remainder_bounds(s, n_terms, order, cfg):
    """Bounds for the Taylor coefficients 0..order of the remainder at s"""
    prec = cfg.prec
    radius = BallReal.exact(from_float(min(1 / math.log(max(n_terms, 2)), 0.25)), prec)
    bounds = [_remainder_bound(s, n_terms, cfg.em_order, 0, prec)]
    if order:
        on_circle = BallReal.exact(_remainder_bound(s, n_terms, cfg.em_order, radius, prec), prec)
        for j in range(1, order + 1):
            bounds.append((on_circle / radius.pow(j)).upper())
    return bounds


def em_tail_jet(s, n_terms, order, cfg):
    """Jet of everything but the direct sum, remainder included"""
    prec = cfg.prec
    log_n = ball_from_int(n_terms, prec).log()
    n_power = ((1 - s) * log_n).exp()
    decay = Jet.exp_linear(-log_n, order, prec)
    bracket = Jet.reciprocal_linear(s - 1, order, prec)
    poly = Jet.linear(s, order, prec)
    inverse_square = ball_from_rational(1, n_terms * n_terms, prec)
    scale = ball_from_int(1, prec)
    for k in range(1, cfg.em_order + 1):
        scale = scale * inverse_square
        bracket = bracket + poly * (bernoulli_coefficient(k, prec) * scale)
        poly = poly.mul_linear(s + (2 * k - 1)).mul_linear(s + 2 * k)
    half_term = Jet.constant(n_power / (2 * n_terms), order, prec)
    tail = decay * (bracket * n_power + half_term)
    return tail.add_error(em_remainder_bounds(s, n_terms, order, cfg))


def zeta_jets(sigmas, t, order, cfg, n_terms):
    """Jets of zeta at sigma + it for several sigmas sharing one height"""
    heads = power_sum_jets(sigmas, t, n_terms, order, cfg.prec, cfg.engine, cfg.vector_threshold)
    out = []
    for sigma, head in zip(sigmas, heads):
        out.append(head + em_tail_jet(BallComplex(sigma, t), n_terms, order, cfg))
    return out


def zeta_jet(s, order, cfg=None):
    """Taylor coefficients zeta^(j)(s)/j! for j <= order"""
    cfg = cfg or EvalConfig.from_settings()
    s = BallComplex.coerce(s, cfg.prec)
    _check_point(s, cfg)
    n_terms = cfg.terms_for(s)
    logger.debug("zeta jet: s=%s N=%d M=%d order=%d", s.to_text(10), n_terms, cfg.em_order, order)
    return zeta_jets([s.re], s.im, order, cfg, n_terms)[0]


def zeta_with_derivative(s, cfg=None):
    jet = zeta_jet(s, 1, cfg)
    return jet[0], jet[1]


def log_deriv(s, cfg=None):
    """zeta'/zeta(s)"""
    cfg = cfg or EvalConfig.from_settings()
    value, derivative = zeta_with_derivative(s, cfg)
    if value.contains_zero():
        raise UndecidedError("zeta ball at s contains 0", cfg.prec)
    return derivative / value


def _series_log_zeta_32(t, cfg):
    """sum_{p^k <= M} p^(-k(3/2+it))/k with the tail bound 2/sqrt(M)"""
    table = cached_table(cfg.series_limit)
    weights = 1.0 / table.exponents.astype(np.float64)
    logs = table.exponents * np.log(table.bases.astype(np.float64))
    sigma = ball_from_rational(3, 2, cfg.prec)
    # logs carry one extra rounding from the multiplication by k
    value = vector_dirichlet_sum(weights, logs, sigma, t, cfg.prec, log_ulps=ULP_BUDGET + 1)
    return value.add_error(log_zeta_32_tail(cfg.series_limit).upper())


def log_zeta_32(t, cfg=None):
    """log zeta(3/2 + it): series enclosure intersected with the principal log"""
    cfg = cfg or EvalConfig.from_settings()
    t = coerce_real(t, cfg.prec)
    s = BallComplex(ball_from_rational(3, 2, cfg.prec), t)
    direct = zeta_jet(s, 0, cfg)[0].log()
    series = _series_log_zeta_32(t, cfg)
    if not direct.overlaps(series):
        raise VerificationError(
            f"log zeta(3/2+it) enclosures disagree at t={t.to_text(12)}: {direct.to_text(10)} vs {series.to_text(10)}"
        )
    return direct.intersect(series)


def _panel_quotient(model, prec):
    if model[0].contains_zero():
        raise UndecidedError("zeta ball on the segment [1, 3/2] + it contains 0", prec)
    return model.derivative() / model.truncate(model.order - 1)


def log_zeta_one_line(t, cfg=None):
    """
    log zeta(1+it) = log zeta(3/2+it) - int_1^{3/2} zeta'/zeta(alpha+it) d alpha.

    The segment is split into quad_nodes panels with quad_points-point
    Gauss-Legendre on each. On every panel zeta is a Taylor model around
    the panel centre; the jet_order-th coefficient is bounded uniformly on
    the segment, which bounds the integrand's derivatives for the remainder.
    """
    cfg = cfg or EvalConfig.from_settings()
    prec = cfg.prec
    t = coerce_real(t, prec)
    if not mpf_le(from_float(float(LOG_ZETA_MIN_T)), t.lower()):
        raise ArgumentError(f"log zeta(1+it) needs t >= {LOG_ZETA_MIN_T}")
    start = log_zeta_32(t, cfg)

    panels = cfg.quad_nodes
    points = cfg.quad_points
    full_order = cfg.jet_order
    n_terms = cfg.terms_for(BallComplex(ball_from_rational(3, 2, prec), t))
    width = ball_from_rational(1, 2 * panels, prec)
    half = ball_from_rational(1, 4 * panels, prec)
    centers = [ball_from_rational(2 * panels + 2 * i + 1, 4 * panels, prec) for i in range(panels)]
    logger.debug("log zeta(1+it): N=%d panels=%d points=%d K=%d", n_terms, panels, points, full_order)

    center_jets = zeta_jets(centers, t, full_order - 1, cfg, n_terms)
    segment = BallComplex(BallReal.from_interval(fone, from_float(1.5), prec), t)
    uniform = magnitude_sum(n_terms, full_order, 1.0)
    wide_tail = em_tail_jet(segment, n_terms, full_order, cfg)[full_order]
    remainder = (BallReal.exact(from_float(uniform), prec) + abs(wide_tail)).upper()

    rule = gauss_legendre(points, prec)
    factor = remainder_factor(points, width, prec)
    panel_ball = BallReal(fzero, half.upper(), prec)
    total = BallComplex.from_real(0, prec)
    for jet in center_jets:
        for node, weight in rule:
            model = shifted_jet(jet, half * node, 1, remainder, full_order)
            value = _panel_quotient(model, prec)[0]
            total = total + value * (half * weight)
        envelope = shifted_jet(jet, panel_ball, 2 * points + 1, remainder, full_order)
        derivative = _panel_quotient(envelope, prec)[2 * points]
        total = BallComplex(
            total.re.add_error((factor * BallReal.exact(derivative.re.mag(), prec)).upper()),
            total.im.add_error((factor * BallReal.exact(derivative.im.mag(), prec)).upper()),
        )
    return start - total


def _contains_pole(z):
    if not z.im.contains_zero():
        return False
    low = z.re.lower()
    candidate = min(to_int(mpf_floor(z.re.upper())), 0)
    return mpf_le(low, from_int(candidate))


def digamma(z, prec=None):
    """
    psi(z) = log w - 1/(2w) - sum_{k<n} 1/(z+k) + O*(1/(4|w|^2)), w = z + n,
    with n the smallest shift giving Re w > 0 and |w| >= 8.
    """
    z = BallComplex.coerce(z, prec or DEFAULT_PREC)
    prec = z.prec
    if _contains_pole(z):
        raise PoleError('digamma', 'ball contains a non-positive integer')
    w = z
    correction = BallComplex.from_real(0, prec)
    limit = BallReal.exact(DIGAMMA_RADIUS, prec)
    for _ in range(DIGAMMA_MAX_SHIFT):
        if w.re.is_positive() and mpf_le(limit.upper(), abs(w).lower()):
            break
        correction = correction + 1 / w
        w = w + 1
    else:
        raise ArgumentError("digamma argument too far left of the imaginary axis")
    value = w.log() - 1 / (2 * w) - correction
    return value.add_error((1 / (4 * w.norm_squared())).upper())
