"""Chebyshev amplitude estimation: interval refinement by inverting exact
binomial confidence intervals through |T_d(a)|^2.

Each iteration finds the largest degree d whose squared Chebyshev polynomial
is invertible on the current interval (accepting it only when it has grown by
the factor r, which resets the coin tally), tosses the T_d coin -- a batch of
n_shots in the early phase, a single toss once the late-phase heuristic with
cutoff nu fires -- and maps the Clopper-Pearson interval on the bias back
through the polynomial.  The loop stops when the interval is narrower than
2 epsilon.
"""

import math
from dataclasses import dataclass
from typing import Optional

from . import _backend as bk
from .errors import DomainError
from .grover import GroverLabel, validate_amplitude
from .records import RunRecord
from .sampling import REPREPARED, QueryLedger
from .stats import ConfidenceInterval, cp_max_halfwidth

TOSS_CAP = 10 ** 6


@dataclass
class ChebAEConfig:
    epsilon: float
    delta: float
    r: float = 2.0
    n_shots: int = 100
    nu: float = 8.0
    mode: str = "destructive"       # 'destructive' | 'tracked'
    alpha_override: Optional[float] = None  # per-interval CP level, default delta/T

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise DomainError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if not 0.0 < self.delta < 1.0:
            raise DomainError(f"delta must be in (0, 1), got {self.delta}")
        if self.r <= 1.0:
            raise DomainError(f"r must exceed 1, got {self.r}")
        if self.n_shots < 1:
            raise DomainError(f"n_shots must be >= 1, got {self.n_shots}")
        if self.nu <= 0.0:
            raise DomainError(f"nu must be positive, got {self.nu}")
        if self.mode not in ("destructive", "tracked"):
            raise DomainError(f"unknown mode {self.mode!r}")


def interval_count_bound(epsilon, r):
    """T = ceil(log_r(1/(2 epsilon))), the confidence-interval budget."""
    t = math.ceil(math.log(1.0 / (2.0 * epsilon)) / math.log(r))
    return max(int(t), 1)


def find_next_cheb(ci):
    """Highest invertible degree on the interval; at least 1."""
    return bk.find_next_cheb(ci.lo, ci.hi)


def invert_cheb_ci(d, p_ci, a_ci):
    """Preimage of the bias interval through T_d^2 on a_ci (not intersected)."""
    lo, hi = bk.invert_cheb(d, p_ci.lo, p_ci.hi, a_ci.lo, a_ci.hi)
    return ConfidenceInterval(lo, hi)


def chebae_estimate(a, cfg, rng):
    """Run the estimator at true amplitude a; returns a RunRecord."""
    validate_amplitude(a)
    t_bound = interval_count_bound(cfg.epsilon, cfg.r)
    alpha = cfg.alpha_override if cfg.alpha_override is not None else cfg.delta / t_bound
    eps_p_max = cp_max_halfwidth(cfg.n_shots, alpha)
    (a_lo, a_hi, q_psi, q_pi, d_max, d_total, tosses, iters, state) = bk.chebae_core(
        rng, a, cfg.epsilon, alpha, eps_p_max, cfg.r, cfg.n_shots, cfg.nu,
        cfg.mode == "tracked", TOSS_CAP)
    ledger = QueryLedger(q_psi=q_psi, q_pi=q_pi, d_max=d_max,
                         d_total=d_total, tosses=tosses)
    interval = ConfidenceInterval(a_lo, a_hi)
    final_state = GroverLabel(state) if state >= 0 else REPREPARED
    return RunRecord(
        algorithm="chebae",
        a_hat=interval.mid,
        interval=interval,
        ledger=ledger,
        final_state=final_state,
        iterations=iters,
        params={"epsilon": cfg.epsilon, "delta": cfg.delta, "r": cfg.r,
                "n_shots": cfg.n_shots, "nu": cfg.nu, "mode": cfg.mode},
    )
