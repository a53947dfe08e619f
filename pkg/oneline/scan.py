"""
Verification scans.

Each grid height t gets one record per quantity: the packaged bound at t
against a ball enclosure of the quantity it bounds at s = 1 + it. Any toolkit
or arithmetic error at a point turns that point's records into undecided
ones with the error as the reason; the scan itself never stops early.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from joblib import Parallel, delayed

from .balls import (
    CERTIFIED_OK, CERTIFIED_VIOLATION, DEFAULT_PREC, UNDECIDED, BallComplex, as_fraction, ball_from_int,
    certified_sign, coerce_real,
)
from .bounds import QUANTITIES, THEOREM_MIN_T, BoundParams, compute_constants, height_text, log_grid, theorem_bounds
from .conf import setting
from .exceptions import ArgumentError, VerificationError
from .zeta_eval import EvalConfig, log_zeta_one_line, zeta_with_derivative

logger = logging.getLogger(__name__)

SPACINGS = ('linear', 'log')


@dataclass(frozen=True)
class ScanConfig:
    """Grid, hypotheses and precision of one scan; heights are decimal strings"""

    t_min: str
    t_max: str
    steps: int
    T: str
    delta: str
    spacing: str = 'linear'
    prec: int = DEFAULT_PREC
    zeros_path: str | None = None
    quantities: tuple = QUANTITIES
    relaxed: bool = False
    workers: int | None = None

    def __post_init__(self):
        if self.steps < 1:
            raise ArgumentError("a scan needs at least one step")
        if self.spacing not in SPACINGS:
            raise ArgumentError(f"unknown spacing {self.spacing!r}; choose linear or log")
        unknown = set(self.quantities) - set(QUANTITIES)
        if unknown or not self.quantities:
            raise ArgumentError(f"unknown quantities: {', '.join(sorted(unknown)) or '(none given)'}")
        if self.workers is not None and self.workers < 1:
            raise ArgumentError("workers must be positive")
        lo, hi = as_fraction(self.t_min), as_fraction(self.t_max)
        if hi < lo:
            raise ArgumentError("t_min must not exceed t_max")
        if lo < THEOREM_MIN_T and not self.relaxed:
            raise ArgumentError("scans start at t >= 1e6; pass relaxed for an observational scan below")
        if hi > self.params.t_limit:
            raise ArgumentError(
                f"t_max={self.t_max} exceeds (1 - delta) T = {float(self.params.t_limit):g}"
            )

    @property
    def params(self):
        return BoundParams.of(self.T, self.delta, self.prec)

    def grid(self):
        """Heights in grid order, as exact rationals"""
        if self.spacing == 'log':
            return [as_fraction(text) for text in log_grid(self.t_min, self.t_max, self.steps)]
        lo, hi = as_fraction(self.t_min), as_fraction(self.t_max)
        if self.steps == 1:
            return [lo]
        return [lo + (hi - lo) * Fraction(k, self.steps - 1) for k in range(self.steps)]


@dataclass(frozen=True)
class VerificationRecord:
    t: str
    quantity: str
    computed: object
    bound: object
    margin: object
    verdict: str
    reason: str = ''

    @classmethod
    def undecided(cls, t, quantity, reason, computed=None, bound=None):
        return cls(t, quantity, computed, bound, None, UNDECIDED, reason)

    @classmethod
    def compare(cls, t, quantity, computed, bound):
        margin = bound - computed
        return cls(t, quantity, computed, bound, margin, certified_sign(margin))


EVALUATION_ERRORS = (VerificationError, ArithmeticError, ValueError)


def _as_reason(exc, what, t):
    """Toolkit errors pass through; anything else is logged with its traceback and wrapped"""
    if isinstance(exc, VerificationError):
        return exc
    logger.error("Evaluating %s at t=%s failed", what, height_text(t), exc_info=exc)
    return VerificationError(f"failed: {type(exc).__name__}: {exc}")


def _point_values(t, quantities, cfg):
    """|zeta'/zeta|, |1/zeta|, |zeta| and |log zeta| at 1 + it, each a ball or the error it raised"""
    prec = cfg.prec
    s = BallComplex(ball_from_int(1, prec), coerce_real(t, prec))
    values = {}
    if {'logderiv', 'inv_zeta', 'zeta'} & set(quantities):
        try:
            zeta, derivative = zeta_with_derivative(s, cfg)
            modulus = abs(zeta)
            values['zeta'] = modulus
            if zeta.contains_zero():
                raise VerificationError("zeta ball at 1 + it contains 0; increase precision")
            values['inv_zeta'] = 1 / modulus
            values['logderiv'] = abs(derivative / zeta)
        except EVALUATION_ERRORS as exc:
            reason = _as_reason(exc, 'zeta', t)
            for quantity in ('logderiv', 'inv_zeta', 'zeta'):
                values.setdefault(quantity, reason)
    if 'log_zeta' in quantities:
        try:
            values['log_zeta'] = abs(log_zeta_one_line(t, cfg))
        except EVALUATION_ERRORS as exc:
            values['log_zeta'] = _as_reason(exc, 'log zeta', t)
    return values


def _scan_point(job):
    """Records for one height, or undecided records carrying the error"""
    t_value, quantities, params, consts, cfg, relaxed = job
    t_text = height_text(t_value)
    try:
        packaged = theorem_bounds(t_value, params, consts, relaxed=relaxed)
    except EVALUATION_ERRORS as exc:
        reason = _as_reason(exc, 'the packaged bounds', t_value)
        return [VerificationRecord.undecided(t_text, q, f"bound: {reason}") for q in quantities]
    values = _point_values(t_value, quantities, cfg)
    records = []
    for quantity in quantities:
        bound = packaged.bound_for(quantity)
        value = values[quantity]
        if isinstance(value, Exception):
            records.append(VerificationRecord.undecided(t_text, quantity, str(value), bound=bound))
        else:
            records.append(VerificationRecord.compare(t_text, quantity, value, bound))
    return records


def run_scan(cfg, eval_cfg=None):
    """One record per (t, quantity), in grid order"""
    eval_cfg = eval_cfg or EvalConfig.from_settings(prec=cfg.prec)
    params = cfg.params
    try:
        consts = compute_constants(cfg.prec)
    except VerificationError as exc:
        logger.warning("Constants undecided at %d bits: %s", cfg.prec, exc)
        return [VerificationRecord.undecided(height_text(t), q, f"constants: {exc}")
                for t in cfg.grid() for q in cfg.quantities]
    if cfg.relaxed:
        logger.warning("Relaxed scan: heights outside the bound's range are observations only")
    jobs = [(t, cfg.quantities, params, consts, eval_cfg, cfg.relaxed) for t in cfg.grid()]
    logger.info("Scanning %d heights in [%s, %s] at %d bits", len(jobs), cfg.t_min, cfg.t_max, cfg.prec)
    workers = cfg.workers or setting('ONELINE_WORKERS')
    if workers > 1 and len(jobs) > 1:
        batches = Parallel(n_jobs=workers)(delayed(_scan_point)(job) for job in jobs)
    else:
        batches = [_scan_point(job) for job in jobs]
    records = [record for batch in batches for record in batch]
    summary = scan_summary(records)
    for record in records:
        if record.verdict == UNDECIDED:
            logger.warning("Undecided %s at t=%s: %s", record.quantity, record.t, record.reason or 'margin straddles 0')
        elif record.verdict == CERTIFIED_VIOLATION:
            logger.error("Certified violation of the %s bound at t=%s", record.quantity, record.t)
    logger.info("Scan finished: %s", ', '.join(f"{k}={v}" for k, v in summary.items()))
    return records


def scan_summary(records):
    counts = {CERTIFIED_OK: 0, CERTIFIED_VIOLATION: 0, UNDECIDED: 0}
    for record in records:
        counts[record.verdict] += 1
    return counts
