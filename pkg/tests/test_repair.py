import math

import pytest

from ampest.chebae import ChebAEConfig
from ampest.errors import DomainError
from ampest.grover import GroverLabel
from ampest.polys import build_repair_pair
from ampest.repair import (RepairConfig, nondestructive_chebae,
                           repair_degree_bound, repair_state)
from ampest.sampling import QueryLedger, sample_pellian
from conftest import fresh_rng

PSI, PSI_PERP = GroverLabel.PSI, GroverLabel.PSI_PERP
PI, PI_PERP = GroverLabel.PI, GroverLabel.PI_PERP


def test_budget_split():
    cfg = RepairConfig(mu=0.05)
    assert cfg.delta_split == pytest.approx(0.04)
    assert cfg.eta_split == pytest.approx(0.01)


def test_degree_bound_example():
    assert repair_degree_bound(1000, RepairConfig(mu=0.05)) == 18724


def test_psi_needs_nothing():
    final, gave_up, delta = repair_state(PSI, 1000, RepairConfig(0.05), 0.5,
                                         fresh_rng(61))
    assert final == PSI and not gave_up
    assert delta == QueryLedger()


def test_ledger_delta_cases():
    cfg = RepairConfig(0.05)
    # pi / pi_perp charge exactly the built fixed-point degree
    for state in (PI, PI_PERP):
        _, _, delta = repair_state(state, 1000, cfg, 0.5, fresh_rng(62))
        kappa = 0.8 * math.sqrt(cfg.delta_split) / 1000
        j, _ = build_repair_pair(kappa, cfg.eta_split)
        assert delta.d_total == j.degree
        assert delta.tosses == 1
    # psi_perp inserts one basis measurement first
    _, _, delta = repair_state(PSI_PERP, 1000, cfg, 0.5, fresh_rng(63))
    kappa = 0.8 * math.sqrt(cfg.delta_split) / 1000
    j, _ = build_repair_pair(kappa, cfg.eta_split)
    assert delta.d_total == 1 + j.degree
    assert delta.tosses == 2


def test_repair_uses_only_pellian_families():
    cfg = RepairConfig(0.05)
    kappa = 0.8 * math.sqrt(cfg.delta_split) / 500
    j, k = build_repair_pair(kappa, cfg.eta_split)
    assert j.kind == "pellian" and k.kind == "pellian"


def test_restoration_probabilities_in_isolation():
    # sampling K from pi with kappa' < a lands on psi almost always;
    # mirrored for J from pi_perp when a < sqrt(1 - kappa'^2)
    eta = 0.01
    kappa = 0.2
    a = 0.5
    j, k = build_repair_pair(kappa, eta)
    trials = 10_000
    rng = fresh_rng(64)
    hit_k = sum(sample_pellian(k, PI, a, rng).state_after == PSI
                for _ in range(trials))
    sigma = math.sqrt(eta * (1 - eta) / trials)
    assert hit_k / trials >= 1 - eta - 3 * sigma
    hit_j = sum(sample_pellian(j, PI_PERP, a, rng).state_after == PSI
                for _ in range(trials))
    assert hit_j / trials >= 1 - eta - 3 * sigma


def test_known_kappa_bypass():
    cfg = RepairConfig(0.05, known_kappa=0.3)
    final, gave_up, delta = repair_state(PI, 10 ** 6, cfg, 0.5, fresh_rng(65))
    j, _ = build_repair_pair(0.3, cfg.eta_split)
    assert delta.d_total == j.degree  # small, despite the huge D


def test_domain_checks():
    with pytest.raises(DomainError):
        RepairConfig(0.0)
    with pytest.raises(DomainError):
        repair_state(PI, 0, RepairConfig(0.05), 0.5, fresh_rng())


def test_nondestructive_requires_tracked():
    with pytest.raises(DomainError):
        nondestructive_chebae(0.5, ChebAEConfig(1e-2, 0.05), RepairConfig(0.1),
                              fresh_rng())


def test_nondestructive_restoration_rate():
    cheb = ChebAEConfig(1e-2, 0.05, mode="tracked")
    rep = RepairConfig(0.1)
    runs = 300
    ok = 0
    for i in range(runs):
        rec = nondestructive_chebae(0.5, cheb, rep, fresh_rng(66, i))
        ok += rec.final_state == PSI
    sigma = math.sqrt(rep.mu * (1 - rep.mu) / runs)
    assert ok / runs >= 1 - rep.mu - 3 * sigma


def test_las_vegas_always_lands_on_psi():
    cheb = ChebAEConfig(1e-2, 0.05, mode="tracked")
    rep = RepairConfig(0.1, las_vegas=True)
    for i in range(100):
        rec = nondestructive_chebae(0.3, cheb, rep, fresh_rng(67, i))
        assert rec.final_state == PSI
        assert not rec.params["repair_gave_up"]
