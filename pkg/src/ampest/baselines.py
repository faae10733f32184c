"""Benchmark reference points: the phase-estimation closed-form query count,
maximum-likelihood estimation over a doubling schedule, and plain classical
probability estimation."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateLikelihood, DomainError
from .grover import validate_amplitude
from .records import RunRecord
from .sampling import REPREPARED, QueryLedger, charge_pellian_batch, count_heads
from .stats import ConfidenceInterval, clopper_pearson


def bhmt_queries(epsilon, delta):
    """ceil(pi/asin(eps)) * ceil((1/2)(8/pi^2 - 1/2)^-2 ln(1/delta)).

    Deterministic query count of the phase-estimation baseline; about 50/eps
    at delta = 0.05.
    """
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must be in (0, 1), got {epsilon}")
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must be in (0, 1), got {delta}")
    outer = math.ceil(math.pi / math.asin(epsilon))
    inner = math.ceil(0.5 * (8.0 / math.pi ** 2 - 0.5) ** -2 * math.log(1.0 / delta))
    return int(outer) * int(inner)


@dataclass
class MlaeSchedule:
    """Rounds of T_{2k+1} sampling with k = 0, 1, 2, 4, ..., 2^K (deduplicated)."""

    shots_per_round: int = 100
    k_values: list = field(default_factory=lambda: [0, 1])

    def __post_init__(self):
        if self.shots_per_round < 1:
            raise DomainError("shots_per_round must be >= 1")
        if any(b <= a for a, b in zip(self.k_values, self.k_values[1:])):
            raise DomainError("k_values must be strictly increasing")


def make_mlae_schedule(max_power, shots_per_round=100):
    """Schedule {0} + {2^0, ..., 2^max_power}."""
    ks = sorted({0} | {2 ** j for j in range(max_power + 1)})
    return MlaeSchedule(shots_per_round=shots_per_round, k_values=ks)


def chi2_quantile_1df(p):
    """Quantile of the chi-squared distribution with one degree of freedom."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must be in (0, 1), got {p}")
    lo, hi = 0.0, 200.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if math.erf(math.sqrt(0.5 * mid)) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _log_likelihood(grid, k_values, heads, shots):
    ll = np.zeros_like(grid)
    th = np.arcsin(grid)
    for k, h in zip(k_values, heads):
        p = np.sin((2 * k + 1) * th) ** 2
        p = np.clip(p, 1e-300, 1.0 - 1e-16)
        ll += h * np.log(p) + (shots - h) * np.log1p(-p)
    return ll


def _golden_refine(f, lo, hi, tol=1e-10):
    # maximize f on [lo, hi]
    g = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - g * (hi - lo)
    x2 = lo + g * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + g * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - g * (hi - lo)
            f1 = f(x1)
    return 0.5 * (lo + hi)


def mlae_estimate(a, schedule, delta, rng, lr_quantile=None):
    """Maximum-likelihood estimation with a likelihood-ratio interval.

    The MLE comes from a 10^4-point grid scan refined by golden section in
    the best cell's neighborhood; the interval is the likelihood-ratio set at
    the threshold `lr_quantile` (default: the chi-squared(1) quantile at
    1 - delta, the standard choice), found by marching outward from the MLE
    and bisecting.
    """
    validate_amplitude(a)
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must be in (0, 1), got {delta}")
    m = schedule.shots_per_round
    ledger = QueryLedger()
    heads = []
    theta = math.asin(a)
    for k in schedule.k_values:
        p = math.sin((2 * k + 1) * theta) ** 2
        h = count_heads(min(max(p, 0.0), 1.0), m, rng)
        heads.append(h)
        charge_pellian_batch(ledger, 2 * k + 1, m)
    if all(h == 0 or h == m for h in heads):
        raise DegenerateLikelihood(f"all rounds saturated: {heads}")

    grid = np.linspace(0.0, 1.0, 10_001)
    ll = _log_likelihood(grid, schedule.k_values, heads, m)
    i_best = int(np.argmax(ll))
    lo_cell = grid[max(i_best - 1, 0)]
    hi_cell = grid[min(i_best + 1, grid.size - 1)]

    def ll_scalar(x):
        return float(_log_likelihood(np.array([x]), schedule.k_values, heads, m)[0])

    a_hat = _golden_refine(ll_scalar, lo_cell, hi_cell)
    ll_max = ll_scalar(a_hat)
    if lr_quantile is None:
        lr_quantile = chi2_quantile_1df(1.0 - delta)
    threshold = ll_max - 0.5 * lr_quantile

    def edge(direction):
        # march along the grid from the MLE, then bisect the crossing
        i = i_best
        while 0 <= i < grid.size and ll[i] >= threshold:
            i += direction
        if i < 0:
            return 0.0
        if i >= grid.size:
            return 1.0
        inner, outer = grid[i - direction], grid[i]
        for _ in range(60):
            mid = 0.5 * (inner + outer)
            if ll_scalar(mid) >= threshold:
                inner = mid
            else:
                outer = mid
        return 0.5 * (inner + outer)

    ci_lo = min(edge(-1), a_hat)
    ci_hi = max(edge(+1), a_hat)
    return RunRecord(
        algorithm="mlae",
        a_hat=a_hat,
        interval=ConfidenceInterval(max(ci_lo, 0.0), min(ci_hi, 1.0)),
        ledger=ledger,
        final_state=REPREPARED,
        iterations=len(schedule.k_values),
        params={"delta": delta, "shots_per_round": m,
                "k_values": list(schedule.k_values)},
    )


def classical_mc(a, epsilon, delta, rng, batch=1000):
    """Degree-1 sampling until the square-root preimage interval beats 2 eps."""
    validate_amplitude(a)
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must be in (0, 1), got {epsilon}")
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must be in (0, 1), got {delta}")
    ledger = QueryLedger()
    p = a * a
    heads = 0
    flips = 0
    iters = 0
    while True:
        iters += 1
        heads += count_heads(p, batch, rng)
        flips += batch
        charge_pellian_batch(ledger, 1, batch)
        ci = clopper_pearson(heads, flips, delta)
        interval = ConfidenceInterval(math.sqrt(ci.lo), math.sqrt(ci.hi))
        if interval.width < 2.0 * epsilon:
            break
    return RunRecord(
        algorithm="classical",
        a_hat=interval.mid,
        interval=interval,
        ledger=ledger,
        final_state=REPREPARED,
        iterations=iters,
        params={"epsilon": epsilon, "delta": delta, "batch": batch},
    )
