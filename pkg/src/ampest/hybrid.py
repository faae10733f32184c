"""Depth-limited estimation: total queries ~ eps^-(1+beta) against a maximum
polynomial degree ~ eps^-(1-beta).

Interval refinement as in the unbiased estimator, but the per-round coin is a
threshold polynomial built from a shifted-and-symmetrized erf ramp whose
slope k_t shrinks with the interval as delta_t^-(1-beta) instead of
delta_t^-1.  The price is a gap gamma_t ~ delta_t^beta around 1/2, costing
~gamma_t^-2 tosses per round.  At beta = 0 this reduces to fixed-gap interval
halving.
"""

import math
from dataclasses import dataclass

from .errors import DomainError
from .grover import validate_amplitude
from .polys import build_hybrid_poly, erf_degree_estimate, kappa_of_tau
from .records import RunRecord
from .sampling import REPREPARED, QueryLedger, charge_semi_pellian_batch, count_heads
from .stats import ConfidenceInterval


@dataclass
class HybridConfig:
    epsilon: float
    delta: float
    beta: float = 0.0
    poly_mode: str = "polynomial"   # 'polynomial' | 'ideal'

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise DomainError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if not 0.0 < self.delta < 1.0:
            raise DomainError(f"delta must be in (0, 1), got {self.delta}")
        if not 0.0 <= self.beta < 1.0:
            raise DomainError(f"beta must be in [0, 1), got {self.beta}")
        if self.poly_mode not in ("ideal", "polynomial"):
            raise DomainError(f"unknown poly_mode {self.poly_mode!r}")


@dataclass(frozen=True)
class RoundParams:
    eta_t: float
    tau_t: float
    k_t: float
    gamma_t: float
    branch: str                     # 'shallow' | 'steep'
    kappa_t: float
    delta_t: float


def round_params(ci, beta):
    """Per-round constants; the shallow branch fires when the midpoint is far
    enough from the origin for the reduced slope, otherwise the slope reverts
    to the fully-quantum delta_t^-1 scaling."""
    width = ci.width
    if not 0.0 < width <= 1.0:
        raise DomainError(f"interval width must be in (0, 1], got {width}")
    shallow = ci.mid >= 0.5 * width ** (1.0 - beta)
    if shallow:
        eta = tau = 0.01 * width ** beta
        kap = kappa_of_tau(tau)
        k = 0.5 * kap / width ** (1.0 - beta)
        gamma = 0.01 * width ** beta
    else:
        eta = tau = 0.01
        kap = kappa_of_tau(tau)
        k = 0.5 * kap / width
        gamma = 0.01
    k = min(max(k, 1.0), 2.0 / width)
    return RoundParams(eta, tau, k, gamma, "shallow" if shallow else "steep",
                       kap, width)


def round_count(epsilon):
    return max(int(math.ceil(math.log(epsilon) / math.log(0.9))), 1)


def _ideal_p2(k, a_mid):
    def p2(a, _k=k, _m=a_mid):
        v = 0.5 + 0.11 * _k * (a - _m)
        v = min(max(v, 0.0), 1.0)
        return v * v
    return p2


def hybrid_estimate(a, cfg, rng):
    validate_amplitude(a)
    t_rounds = round_count(cfg.epsilon)
    delta_t = cfg.delta / t_rounds
    ledger = QueryLedger()
    a_lo = 0.0
    seen_shallow_past_tstar = False
    branch_reverted = False
    t_star = math.ceil(math.log(a) / math.log(0.9)) if a > 0.0 else None
    for t in range(t_rounds):
        width = 0.9 ** t
        ci = ConfidenceInterval(a_lo, min(a_lo + width, 1.0))
        rp = round_params(ci, cfg.beta)
        if t_star is not None and t > t_star:
            # past t* the shallow branch must persist (checked by the tests;
            # recorded rather than raised since the guarantee holds only on
            # the 1-delta event that the interval still contains a)
            if rp.branch == "steep" and seen_shallow_past_tstar:
                branch_reverted = True
            if rp.branch == "shallow":
                seen_shallow_past_tstar = True
        if cfg.poly_mode == "polynomial":
            poly = build_hybrid_poly(rp.tau_t, rp.eta_t, rp.k_t, ci.mid,
                                     enforce_midpoint=False, verify=False)
            p2 = poly.p2(a)
            degree = poly.degree
        else:
            p2 = _ideal_p2(rp.k_t, ci.mid)(a)
            degree = erf_degree_estimate(rp.k_t, rp.eta_t)
        m_t = int(math.ceil(0.5 * rp.gamma_t ** -2 * math.log(1.0 / delta_t)))
        heads = count_heads(p2, m_t, rng)
        charge_semi_pellian_batch(ledger, degree, m_t)
        if heads > m_t * (0.25 + rp.gamma_t ** 2):
            a_lo = a_lo + 0.1 * width
    width = 0.9 ** t_rounds
    interval = ConfidenceInterval(a_lo, min(a_lo + width, 1.0))
    return RunRecord(
        algorithm="hybrid",
        a_hat=interval.mid,
        interval=interval,
        ledger=ledger,
        final_state=REPREPARED,
        iterations=t_rounds,
        params={"epsilon": cfg.epsilon, "delta": cfg.delta, "beta": cfg.beta,
                "poly_mode": cfg.poly_mode, "branch_reverted": branch_reverted},
    )
