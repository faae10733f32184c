"""Nearly unbiased estimation: interval refinement through line polynomials,
then one calibrated toss that picks an endpoint.

Each of the T = ceil(log_0.9(epsilon)) rounds tosses a coin whose bias tracks
the position of the amplitude inside the current interval and cuts off the
far 10% of whichever side the majority vote indicates.  A final toss of an
eta-accurate line polynomial returns a_max on heads and a_min on tails, so
the estimate lands on an interval endpoint but its expectation is within
epsilon*eta + delta of the amplitude.

The interval width is tracked as 0.9**t rather than by endpoint differences,
which keeps every round's polynomial degree -- and hence the total degree --
bit-identical across seeds.
"""

import math
from dataclasses import dataclass

from .errors import DomainError
from .grover import validate_amplitude
from .polys import build_line_poly
from .records import RunRecord
from .sampling import REPREPARED, QueryLedger, charge_semi_pellian_batch, count_heads
from .stats import ConfidenceInterval

ROUND_ETA = 0.1


@dataclass
class UnbiasedConfig:
    epsilon: float
    delta: float
    eta: float
    poly_mode: str = "ideal"        # 'ideal' | 'polynomial'

    def __post_init__(self):
        for name in ("epsilon", "delta", "eta"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise DomainError(f"{name} must be in (0, 1), got {v}")
        if self.poly_mode not in ("ideal", "polynomial"):
            raise DomainError(f"unknown poly_mode {self.poly_mode!r}")


def round_count(epsilon):
    """T = ceil(log_0.9(epsilon)); the final width 0.9**T is <= epsilon."""
    return max(int(math.ceil(math.log(epsilon) / math.log(0.9))), 1)


def shots_for_round(epsilon, delta, t):
    """m_t = ceil(6 ln(1/delta_t)) with delta_t = (eps*delta/10)*0.9^-t.

    delta_t >= 1 (possible at late rounds for large epsilon) clamps to one
    toss; the union bound already budgets the total failure.
    """
    delta_t = (epsilon * delta / 10.0) * 0.9 ** (-t)
    if delta_t >= 1.0:
        return 1
    return max(int(math.ceil(6.0 * math.log(1.0 / delta_t))), 1)


def unbiased_estimate(a, cfg, rng):
    validate_amplitude(a)
    t_rounds = round_count(cfg.epsilon)
    ledger = QueryLedger()
    a_lo = 0.0
    for t in range(t_rounds):
        width = 0.9 ** t
        poly = build_line_poly(a_lo, min(a_lo + width, 1.0), ROUND_ETA,
                               cfg.poly_mode, delta_for_degree=width)
        m_t = shots_for_round(cfg.epsilon, cfg.delta, t)
        heads = count_heads(poly.p2(a), m_t, rng)
        charge_semi_pellian_batch(ledger, poly.degree, m_t)
        if heads > m_t / 2.0:
            a_lo = a_lo + 0.1 * width
    width = 0.9 ** t_rounds
    final_poly = build_line_poly(a_lo, min(a_lo + width, 1.0), cfg.eta,
                                 cfg.poly_mode, delta_for_degree=width)
    bit = count_heads(final_poly.p2(a), 1, rng)
    charge_semi_pellian_batch(ledger, final_poly.degree, 1)
    interval = ConfidenceInterval(a_lo, min(a_lo + width, 1.0))
    return RunRecord(
        algorithm="unbiased",
        a_hat=interval.hi if bit else interval.lo,
        interval=interval,
        ledger=ledger,
        final_state=REPREPARED,
        iterations=t_rounds,
        params={"epsilon": cfg.epsilon, "delta": cfg.delta, "eta": cfg.eta,
                "poly_mode": cfg.poly_mode},
    )
