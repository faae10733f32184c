"""State restoration after a tracked estimation run.

Whatever label the chain ended on, one extra polynomial sample of degree
proportional to the run's total degree D returns it to psi with probability
at least 1 - mu: psi needs nothing, psi_perp is first measured into the
other basis, pi_perp samples the J polynomial (guessing the amplitude is
small), and pi samples K (guessing it is large).  The threshold kappa is
derived from D alone, so no bounds on the amplitude are needed.
"""

import math
from dataclasses import dataclass
from typing import Optional

from .chebae import chebae_estimate
from .errors import DomainError
from .grover import GroverLabel, validate_amplitude
from .polys import build_repair_pair
from .sampling import QueryLedger, measure_basis_swap, sample_pellian

LAS_VEGAS_CAP = 10 ** 6


@dataclass
class RepairConfig:
    mu: float
    las_vegas: bool = False
    known_kappa: Optional[float] = None  # bypasses the D-derived threshold

    def __post_init__(self):
        if not 0.0 < self.mu < 1.0:
            raise DomainError(f"mu must be in (0, 1), got {self.mu}")

    @property
    def delta_split(self):
        return 0.8 * self.mu

    @property
    def eta_split(self):
        return 0.2 * self.mu


def repair_degree_bound(d_total, cfg):
    """ceil((5/4)(D/sqrt(delta)) ln(2/sqrt(eta))), the advertised repair cost."""
    return int(math.ceil(1.25 * (d_total / math.sqrt(cfg.delta_split))
                         * math.log(2.0 / math.sqrt(cfg.eta_split))))


def repair_state(state, d_total, cfg, a, rng):
    """Attempt the four-case restoration; returns (final, gave_up, ledger_delta).

    `gave_up` means the monte-carlo variant ended somewhere other than psi
    (or, with las_vegas=True, that the measurement loop hit its cap).
    """
    validate_amplitude(a)
    if d_total < 1:
        raise DomainError(f"total degree must be >= 1, got {d_total}")
    delta = QueryLedger()
    if state == GroverLabel.PSI:
        return GroverLabel.PSI, False, delta

    kappa = cfg.known_kappa
    if kappa is None:
        kappa = 0.8 * math.sqrt(cfg.delta_split) / d_total
    j_spec, k_spec = build_repair_pair(kappa, cfg.eta_split)
    if cfg.known_kappa is None:
        # the construction rounds the degree up to odd, so allow one above
        # the advertised ceiling
        assert j_spec.degree <= repair_degree_bound(d_total, cfg) + 1

    current = state
    if current == GroverLabel.PSI_PERP:
        current = measure_basis_swap(current, a, rng, delta)
    if current == GroverLabel.PI_PERP:
        current = sample_pellian(j_spec, current, a, rng, delta).state_after
    elif current == GroverLabel.PI:
        current = sample_pellian(k_spec, current, a, rng, delta).state_after
    if current == GroverLabel.PSI:
        return current, False, delta
    if not cfg.las_vegas:
        return current, True, delta
    # keep measuring in the opposite basis until psi shows up (degree 1 each)
    for _ in range(LAS_VEGAS_CAP):
        current = measure_basis_swap(current, a, rng, delta)
        if current == GroverLabel.PSI:
            return current, False, delta
    return current, True, delta


def nondestructive_chebae(a, cheb_cfg, repair_cfg, rng):
    """Tracked estimation plus the repair step; RunRecord ends at a label."""
    if cheb_cfg.mode != "tracked":
        raise DomainError("non-destructive estimation needs tracked mode")
    rec = chebae_estimate(a, cheb_cfg, rng)
    if rec.ledger.d_total >= 1:
        final, gave_up, delta = repair_state(
            rec.final_state, rec.ledger.d_total, repair_cfg, a, rng)
        bound = repair_degree_bound(rec.ledger.d_total, repair_cfg)
        pre_total = rec.ledger.d_total
        rec.ledger.merge(delta)
        if not repair_cfg.las_vegas:
            # +1 for odd degree rounding, +1 for the psi_perp measurement
            assert rec.ledger.d_total <= pre_total + bound + 2
        rec.final_state = final
        rec.params["repair_gave_up"] = gave_up
    rec.algorithm = "repair-chebae"
    rec.params["mu"] = repair_cfg.mu
    rec.params["las_vegas"] = repair_cfg.las_vegas
    return rec
