"""Acceptance suite: one test per acceptance criterion, each printing a
PASS line with the measured numbers (run with `pytest -s` to see them all).

The Monte Carlo criteria are seeded, so every rerun reproduces the same
numbers exactly.
"""

import csv
import math

import numpy as np
import pytest

import ampest
from ampest import _backend as bk
from ampest.grover import GroverLabel, qsp_unitary
from ampest.harness import SweepConfig, fit_models, run_sweep
from ampest.polys import (build_chebyshev, build_erf_poly, build_hybrid_poly,
                          build_line_poly, build_repair_pair)
from ampest.sampling import sample_pellian
from ampest.stats import ConfidenceInterval, clopper_pearson, hoeffding_shots
from conftest import fresh_rng

DELTA = 0.05


def model_ab(eps, a_coef=1.71, b_coef=2.08):
    return a_coef / eps * math.log(b_coef * math.log(1.0 / eps))


def sweep_rows(tmp_path_factory, name, cfg):
    out = tmp_path_factory.mktemp("acc") / f"{name}.csv"
    cfg.out = str(out)
    run_sweep(cfg)
    with open(out) as f:
        return str(out), list(csv.DictReader(f))


@pytest.fixture(scope="session")
def headline_sweep(tmp_path_factory):
    eps = [float(e) for e in np.geomspace(1e-3, 1e-6, 9)]
    cfg = SweepConfig(
        algorithm="chebae",
        grid={"a": [0.5], "eps": eps, "delta": [DELTA], "mode": ["tracked"]},
        runs=1000, seed=0)
    return sweep_rows(tmp_path_factory, "headline", cfg)


@pytest.fixture(scope="session")
def wide_grid_sweep(tmp_path_factory):
    # the one-parameter C/eps fit's reference value belongs to the wider
    # 1e-2..1e-6 protocol
    eps = [float(e) for e in np.geomspace(1e-2, 1e-6, 9)]
    cfg = SweepConfig(
        algorithm="chebae",
        grid={"a": [0.5], "eps": eps, "delta": [DELTA], "mode": ["tracked"]},
        runs=1000, seed=0)
    return sweep_rows(tmp_path_factory, "wide-grid", cfg)


def group_by_eps(rows, field="q_pi"):
    out = {}
    for r in rows:
        out.setdefault(float(r["eps"]), []).append(float(r[field]))
    return out


def test_chebae_headline_fit(headline_sweep):
    _, rows = headline_sweep
    by_eps = group_by_eps(rows)
    fails = group_by_eps(rows, field="abs_err")
    lines = []
    for eps in sorted(by_eps, reverse=True):
        mean_q = float(np.mean(by_eps[eps]))
        ratio = mean_q / model_ab(eps)
        frac_fail = float(np.mean(np.array(fails[eps]) > eps))
        assert len(by_eps[eps]) == 1000
        assert abs(1.0 - ratio) <= 0.10, (eps, ratio)
        assert frac_fail < DELTA, (eps, frac_fail)
        lines.append(f"eps={eps:.3g} ratio={ratio:.4f} fail={frac_fail:.3f}")
    print("\nACCEPTANCE chebae-headline-fit: PASS\n  " + "\n  ".join(lines))


def test_chebae_simple_model_and_baseline_ratio(wide_grid_sweep, headline_sweep):
    # the C/eps reference belongs to the 1e-2..1e-6 protocol; the
    # two-parameter model to the 1e-3..1e-6 range of the headline target
    path_wide, _ = wide_grid_sweep
    fit_c = fit_models(path_wide)
    assert 4.2 <= fit_c["C"] <= 5.2, fit_c["C"]
    path_headline, _ = headline_sweep
    fit_ab = fit_models(path_headline)  # informational: the AB ridge is flat
    for eps in (1e-2, 1e-3, 1e-4, 1e-5, 1e-6):
        ratio = ampest.bhmt_queries(eps, DELTA) * eps
        assert 49.5 <= ratio <= 50.8, (eps, ratio)
    print(f"\nACCEPTANCE chebae-simple-model: PASS  C={fit_c['C']:.3f}, "
          f"(A, B)=({fit_ab['A']:.2f}, {fit_ab['B']:.2f}) at "
          f"{fit_ab['max_rel_err_AB']:.3f} max dev, vs baseline ~50/eps "
          f"(~{50 / fit_c['C']:.1f}x advantage)")


def test_interval_inversion_figures():
    d = ampest.find_next_cheb(ConfidenceInterval(0.34, 0.56))
    assert d == 5
    got = ampest.invert_cheb_ci(5, ConfidenceInterval(0.35, 0.75),
                                ConfidenceInterval(0.34, 0.56))
    # exact preimage, frozen from a 2e6-point grid oracle; the quoted
    # reference [0.405, 0.481] rounds inconsistently with its own inputs
    # (only good to ~2e-3)
    assert got.lo == pytest.approx(0.4067366430, abs=1e-9)
    assert got.hi == pytest.approx(0.4809238929, abs=1e-9)
    assert abs(got.lo - 0.405) <= 2e-3
    assert abs(got.hi - 0.481) <= 2e-3
    print(f"\nACCEPTANCE interval-inversion: PASS  d=5, "
          f"preimage=[{got.lo:.6f}, {got.hi:.6f}] "
          "(reference rounding [0.405, 0.481] holds to 2e-3; exact left "
          "endpoint is 0.40674)")


@pytest.mark.xfail(strict=True,
                   reason="the quoted reference interval is inconsistent "
                          "with its own inputs: inverting p=[0.35,0.75] "
                          "exactly gives a left endpoint 0.40674, outside "
                          "0.405+-0.001")
def test_interval_inversion_reference_tolerance():
    got = ampest.invert_cheb_ci(5, ConfidenceInterval(0.35, 0.75),
                                ConfidenceInterval(0.34, 0.56))
    assert abs(got.lo - 0.405) <= 1e-3


def test_repair_polynomials():
    j, k = build_repair_pair(0.25, 0.1)
    assert j.degree == 9
    gamma = j.params["gamma"]
    j_max = max(j.p2(float(x)) for x in np.linspace(0.0, gamma, 400))
    k_min = min(k.p2(float(x)) for x in np.linspace(0.25, 1.0, 400))
    assert j_max <= 0.1
    assert k_min >= 0.9
    print(f"\nACCEPTANCE repair-polynomials: PASS  l=9, "
          f"max|J|^2={j_max:.4f} on [0,kbar], min|K|^2={k_min:.4f} on [k,1]")


def test_nondestructive_estimation(tmp_path_factory):
    runs = 500
    cfg = SweepConfig(
        algorithm="repair-chebae",
        grid={"a": [1e-6, 0.5, 0.999999], "eps": [1e-3], "delta": [DELTA],
              "mu": [0.05]},
        runs=runs, seed=1)
    _, rows = sweep_rows(tmp_path_factory, "repair", cfg)
    sigma = math.sqrt(0.05 * 0.95 / runs)
    lines = []
    for a in (1e-6, 0.5, 0.999999):
        frac = np.mean([r["final_state"] == "psi" for r in rows
                        if float(r["a"]) == a])
        assert frac >= 1 - 0.05 - 3 * sigma, (a, frac)
        lines.append(f"a={a:g}: psi rate {frac:.3f}")
    print("\nACCEPTANCE non-destructive: PASS  " + "; ".join(lines))


def test_unbiased_estimation(tmp_path_factory):
    runs = 100_000
    cfg = SweepConfig(
        algorithm="unbiased",
        grid={"a": [0.3], "eps": [1e-2], "delta": [1e-3], "eta": [0.1],
              "mode": ["ideal"]},
        runs=runs, seed=2)
    _, rows = sweep_rows(tmp_path_factory, "unbiased", cfg)
    hats = np.array([float(r["a_hat"]) for r in rows])
    stderr = hats.std() / math.sqrt(runs)
    bias_bound = 1e-2 * 0.1 + 1e-3 + 3 * stderr
    bias = abs(hats.mean() - 0.3)
    assert bias <= bias_bound
    fails = np.mean(np.abs(hats - 0.3) >= 1e-2)
    sigma = math.sqrt(1e-3 * (1 - 1e-3) / runs)
    assert fails <= 1e-3 + 3 * sigma
    totals = {r["d_total"] for r in rows}
    assert len(totals) == 1
    print(f"\nACCEPTANCE unbiased: PASS  |mean-a|={bias:.2e} "
          f"(bound {bias_bound:.2e}), fail={fails:.2e}, D={totals.pop()} "
          "(identical across all seeds)")


def test_hybrid_scaling(tmp_path_factory):
    runs = 100
    eps_grid = [float(e) for e in np.geomspace(1e-2, 1e-4, 5)]
    lines = []
    for beta in (0.0, 0.3, 0.6):
        cfg = SweepConfig(
            algorithm="hybrid",
            grid={"a": [0.5], "eps": eps_grid, "delta": [DELTA],
                  "beta": [beta], "mode": ["polynomial"]},
            runs=runs, seed=3)
        _, rows = sweep_rows(tmp_path_factory, f"hybrid{beta}", cfg)
        log_inv = []
        log_dmax = []
        log_dtot = []
        for eps in eps_grid:
            cell = [r for r in rows if float(r["eps"]) == eps]
            assert len(cell) == runs
            frac_fail = np.mean([float(r["abs_err"]) >= eps for r in cell])
            sigma = math.sqrt(DELTA * (1 - DELTA) / runs)
            assert frac_fail <= DELTA + 3 * sigma, (beta, eps, frac_fail)
            log_inv.append(math.log(1.0 / eps))
            log_dmax.append(math.log(np.mean([float(r["d_max"]) for r in cell])))
            log_dtot.append(math.log(np.mean([float(r["d_total"]) for r in cell])))
        s_max = np.polyfit(log_inv, log_dmax, 1)[0]
        s_tot = np.polyfit(log_inv, log_dtot, 1)[0]
        assert abs(s_max - (1 - beta)) <= 0.15, (beta, s_max)
        assert abs(s_tot - (1 + beta)) <= 0.15, (beta, s_tot)
        lines.append(f"beta={beta}: d_max slope {s_max:.3f} "
                     f"(target {1 - beta}), d_total slope {s_tot:.3f} "
                     f"(target {1 + beta})")
    print("\nACCEPTANCE hybrid-scaling: PASS\n  " + "\n  ".join(lines))


def test_polynomial_certificates():
    line = build_line_poly(0.3, 0.6, 0.1)
    erf = build_erf_poly(4.0, 0.025)
    hyb = build_hybrid_poly(0.025, 0.025, 4.0, 0.47)
    for spec in (line, erf, hyb):
        assert spec.certificate is not None and spec.certificate.passed
    assert erf.degree % 2 == 1 and erf.degree <= 31
    print(f"\nACCEPTANCE certificates: PASS  line(deg {line.degree}, "
          f"err {line.certificate.max_error:.3f} <= 0.1), erf(deg {erf.degree}"
          f" <= 31, err {erf.certificate.max_error:.4f} <= 0.025), "
          f"hybrid(deg {hyb.degree})")


def test_framework_identities():
    # phase sequences of pi/2 realize the Chebyshev magnitudes
    for d in range(1, 51):
        phases = [math.pi / 2] * (d - 1)
        for a in np.linspace(0.0, 1.0, 21):
            u = qsp_unitary(float(a), phases)
            assert abs(abs(u[0, 0]) - abs(bk.cheb_t(d, float(a)))) < 1e-10
            assert abs(abs(u[0, 0]) ** 2 + abs(u[0, 1]) ** 2 - 1.0) < 1e-10
    # odd-degree sine identity
    for d in (1, 3, 7, 15, 33):
        for a in np.linspace(0.0, 1.0, 101):
            lhs = bk.cheb_t(d, float(a)) ** 2
            rhs = math.sin(d * math.asin(float(a))) ** 2
            assert abs(lhs - rhs) < 1e-10
    # fixed-point polynomial is dominated by the Chebyshev near 0, dominates near 1
    j, _ = build_repair_pair(0.25, 0.1)
    l = j.degree
    for a in np.linspace(0.0, math.sin(math.pi / (2 * l)), 50):
        assert abs(j.value(float(a))) <= abs(bk.cheb_t(l, float(a))) + 1e-12
    for a in np.linspace(math.cos(math.pi / (2 * l)), 1.0, 50):
        assert abs(j.value(float(a))) >= abs(bk.cheb_t(l, float(a))) - 1e-12
    # extreme amplitudes confine the tracked chain
    delta = 0.1
    rng = fresh_rng(90)
    runs, total_degree = 500, 64
    esc_small = esc_large = 0
    for _ in range(runs):
        degrees = []
        left = total_degree
        while left > 0:
            d = int(rng.integers(1, min(8, left) + 1))
            degrees.append(d)
            left -= d
        a_small = math.sin(math.sqrt(delta) / total_degree) * 0.99
        a_large = min(math.cos(math.sqrt(delta) / total_degree) * 1.001, 1.0)
        state = GroverLabel.PSI
        for d in degrees:
            state = sample_pellian(build_chebyshev(d), state, a_small, rng).state_after
        esc_small += state not in (GroverLabel.PSI, GroverLabel.PI_PERP)
        state = GroverLabel.PSI
        for d in degrees:
            state = sample_pellian(build_chebyshev(d), state, a_large, rng).state_after
        esc_large += state not in (GroverLabel.PSI, GroverLabel.PI)
    assert esc_small / runs <= delta
    assert esc_large / runs <= delta
    print(f"\nACCEPTANCE framework-identities: PASS  "
          f"(confinement escapes: {esc_small}/{runs} low, {esc_large}/{runs} high)")


def test_statistics_criteria():
    ci = clopper_pearson(0, 10, 0.05)
    assert ci.lo == 0.0
    assert abs(ci.hi - (1.0 - 0.025 ** 0.1)) < 1e-9
    assert hoeffding_shots(0.1, 0.05) == 150
    rng = fresh_rng(91)
    n, alpha, sims = 100, 0.05, 20_000
    rates = []
    for p in (0.05, 0.3, 0.5, 0.876, 0.99):
        heads = rng.binomial(n, p, size=sims)
        cache = {}
        hits = 0
        for h in heads:
            ci = cache.get(int(h))
            if ci is None:
                ci = clopper_pearson(int(h), n, alpha)
                cache[int(h)] = ci
            hits += ci.lo <= p <= ci.hi
        rates.append(hits / sims)
        assert hits / sims >= 0.95, p
    print(f"\nACCEPTANCE statistics: PASS  zero-heads closed form exact, "
          f"hoeffding(0.1,0.05)=150, coverage={['%.3f' % r for r in rates]}")
