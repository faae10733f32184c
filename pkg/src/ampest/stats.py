"""Exact binomial confidence machinery and sample-count formulas."""

import math
from dataclasses import dataclass

from . import _backend as bk
from .errors import DomainError


@dataclass(frozen=True)
class ConfidenceInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if not 0.0 <= self.lo <= self.hi <= 1.0:
            raise DomainError(f"need 0 <= lo <= hi <= 1, got [{self.lo}, {self.hi}]")

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return self.lo + 0.5 * (self.hi - self.lo)


def clopper_pearson(heads, flips, alpha):
    """Exact two-sided interval from the binomial tails, bisected to ~1e-15.

    lo = 0 at zero heads, else the p with Pr[X >= heads] = alpha/2;
    hi = 1 at all heads, else the p with Pr[X <= heads] = alpha/2.
    """
    if flips < 1:
        raise DomainError(f"flips must be >= 1, got {flips}")
    if not 0 <= heads <= flips:
        raise DomainError(f"need 0 <= heads <= flips, got {heads}/{flips}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must be in (0, 1), got {alpha}")
    lo, hi = bk.cp_interval(heads, flips, alpha)
    return ConfidenceInterval(lo, hi)


def hoeffding_shots(gamma, delta):
    """ceil(gamma^-2 ln(1/delta) / 2) tosses to separate 1/2 +- gamma biases."""
    if not 0.0 < gamma < 0.5:
        raise DomainError(f"gamma must be in (0, 1/2), got {gamma}")
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must be in (0, 1), got {delta}")
    return int(math.ceil(0.5 * gamma ** -2 * math.log(1.0 / delta)))


_cp_max_cache = {}


def cp_max_halfwidth(flips, alpha):
    """Worst-case CP halfwidth over all head counts; exact enumeration, cached."""
    if flips < 1:
        raise DomainError(f"flips must be >= 1, got {flips}")
    key = (flips, alpha)
    out = _cp_max_cache.get(key)
    if out is None:
        out = bk.cp_max_halfwidth(flips, alpha)
        _cp_max_cache[key] = out
    return out
