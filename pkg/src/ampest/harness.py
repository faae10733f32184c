"""Sweep execution, deterministic seeding, CSV emission, and model fitting.

A sweep is a cartesian grid of cells, each run `runs` times.  Run i of cell c
draws its generator from SeedSequence((base_seed, c, i)), so re-running any
sweep reproduces the CSV body byte for byte regardless of worker count; rows
are emitted in (cell, run) order through a reorder buffer and flushed one by
one, so a killed sweep leaves a valid prefix.

Floats are written with repr() (shortest round-trip form).  The eps column
carries the requested accuracy; for the likelihood baseline, which takes no
accuracy parameter, it carries the measured interval half-width, and the
success column is (abs_err <= eps) in both cases.  wall_us is wall-clock time
and is excluded from determinism guarantees.
"""

import csv
import itertools
import json
import os
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.random import PCG64, Generator, SeedSequence

from .baselines import classical_mc, make_mlae_schedule, mlae_estimate
from .chebae import ChebAEConfig, chebae_estimate
from .errors import DomainError, InsufficientData
from .grover import GroverLabel
from .hybrid import HybridConfig, hybrid_estimate
from .repair import RepairConfig, nondestructive_chebae
from .unbiased import UnbiasedConfig, unbiased_estimate

CSV_HEADER = ("run_id,algorithm,a,eps,delta,beta,eta,mu,seed,a_hat,abs_err,"
              "success,q_psi,q_pi,d_max,d_total,tosses,final_state,wall_us")

ALGORITHMS = ("chebae", "unbiased", "hybrid", "repair-chebae", "mlae", "classical")

_GRID_KEYS = ("a", "eps", "delta", "beta", "eta", "mu", "mode")


@dataclass
class SweepConfig:
    algorithm: str
    grid: dict
    runs: int
    seed: int = 0
    out: Optional[str] = None
    workers: Optional[int] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise DomainError(f"unknown algorithm {self.algorithm!r}")
        if self.runs < 1:
            raise DomainError(f"runs must be >= 1, got {self.runs}")
        unknown = set(self.grid) - set(_GRID_KEYS)
        if unknown:
            raise DomainError(f"unknown grid keys {sorted(unknown)}")
        if "a" not in self.grid:
            raise DomainError("grid must include 'a'")

    @classmethod
    def from_json(cls, path):
        with open(path) as f:
            raw = json.load(f)
        return cls(algorithm=raw["algorithm"], grid=raw["grid"],
                   runs=int(raw["runs"]), seed=int(raw.get("seed", 0)),
                   out=raw.get("out"), workers=raw.get("workers"),
                   extra=raw.get("extra", {}))

    def cells(self):
        keys = [k for k in _GRID_KEYS if k in self.grid]
        values = [self.grid[k] for k in keys]
        return [dict(zip(keys, combo)) for combo in itertools.product(*values)]


def run_one(algorithm, cell, extra, rng):
    """Dispatch one run; `cell` holds the grid values, `extra` fixed knobs."""
    a = cell["a"]
    if extra.get("shift_amplitude"):
        a = 0.5 * (1.0 + a)
    if algorithm == "chebae":
        cfg = ChebAEConfig(
            epsilon=cell["eps"], delta=cell["delta"],
            r=extra.get("r", 2.0), n_shots=extra.get("n_shots", 100),
            nu=extra.get("nu", 8.0), mode=cell.get("mode", "destructive"))
        return a, chebae_estimate(a, cfg, rng)
    if algorithm == "unbiased":
        cfg = UnbiasedConfig(epsilon=cell["eps"], delta=cell["delta"],
                             eta=cell["eta"], poly_mode=cell.get("mode", "ideal"))
        return a, unbiased_estimate(a, cfg, rng)
    if algorithm == "hybrid":
        cfg = HybridConfig(epsilon=cell["eps"], delta=cell["delta"],
                           beta=cell.get("beta", 0.0),
                           poly_mode=cell.get("mode", "polynomial"))
        return a, hybrid_estimate(a, cfg, rng)
    if algorithm == "repair-chebae":
        cheb = ChebAEConfig(
            epsilon=cell["eps"], delta=cell["delta"],
            r=extra.get("r", 2.0), n_shots=extra.get("n_shots", 100),
            nu=extra.get("nu", 8.0), mode="tracked")
        rep = RepairConfig(mu=cell["mu"],
                           las_vegas=extra.get("las_vegas", False),
                           known_kappa=extra.get("known_kappa"))
        return a, nondestructive_chebae(a, cheb, rep, rng)
    if algorithm == "mlae":
        schedule = make_mlae_schedule(extra.get("k_max", 6),
                                      extra.get("shots_per_round", 100))
        return a, mlae_estimate(a, schedule, cell["delta"], rng)
    if algorithm == "classical":
        return a, classical_mc(a, cell["eps"], cell["delta"], rng)
    raise DomainError(f"unknown algorithm {algorithm!r}")


def _fmt(v):
    if v is None or v == "":
        return ""
    if isinstance(v, bool):
        return "True" if v else "False"
    if isinstance(v, float):
        return repr(float(v))  # shortest round-trip form, numpy scalars included
    return str(v)


def _state_name(state):
    if isinstance(state, GroverLabel):
        return state.name.lower()
    return str(state)


def _run_chunk(args):
    algorithm, cell, extra, base_seed, cell_index, run_indices, runs_per_cell = args
    rows = []
    for i in run_indices:
        rng = Generator(PCG64(SeedSequence((base_seed, cell_index, i))))
        t0 = time.perf_counter()
        a_used, rec = run_one(algorithm, cell, extra, rng)
        wall_us = int((time.perf_counter() - t0) * 1e6)
        eps = cell.get("eps")
        if eps is None:
            eps = 0.5 * rec.interval.width
        abs_err = abs(rec.a_hat - a_used)
        row = [
            str(cell_index * runs_per_cell + i),
            algorithm,
            _fmt(float(a_used)),
            _fmt(float(eps)),
            _fmt(cell.get("delta")),
            _fmt(cell.get("beta")),
            _fmt(cell.get("eta")),
            _fmt(cell.get("mu")),
            f"b{base_seed}c{cell_index}r{i}",
            _fmt(float(rec.a_hat)),
            _fmt(float(abs_err)),
            _fmt(bool(abs_err <= eps)),
            str(rec.ledger.q_psi),
            str(rec.ledger.q_pi),
            str(rec.ledger.d_max),
            str(rec.ledger.d_total),
            str(rec.ledger.tosses),
            _state_name(rec.final_state),
            str(wall_us),
        ]
        rows.append((cell_index, i, ",".join(row)))
    return rows


def _worker_count(cfg):
    env = os.environ.get("QAE_WORKERS")
    if env:
        return max(1, int(env))
    if cfg.workers:
        return max(1, int(cfg.workers))
    return 1


def run_sweep(cfg, stream=None):
    """Execute the sweep, appending one flushed CSV row per run in
    (cell, run) order; returns the number of rows written."""
    cells = cfg.cells()
    chunks = []
    for ci, cell in enumerate(cells):
        step = max(1, min(cfg.runs, 200))
        for start in range(0, cfg.runs, step):
            idx = list(range(start, min(start + step, cfg.runs)))
            chunks.append((cfg.algorithm, cell, cfg.extra, cfg.seed, ci, idx,
                           cfg.runs))
    own = stream is None
    f = open(cfg.out, "w") if own else stream
    try:
        f.write(CSV_HEADER + "\n")
        f.flush()
        written = 0
        workers = _worker_count(cfg)
        if workers == 1:
            for chunk in chunks:
                for _, _, line in _run_chunk(chunk):
                    f.write(line + "\n")
                    f.flush()
                    written += 1
        else:
            buffered = {}
            next_out = 0
            with ProcessPoolExecutor(max_workers=workers) as pool:
                pending = {pool.submit(_run_chunk, chunk): k
                           for k, chunk in enumerate(chunks)}
                while pending:
                    done, _ = wait(pending, return_when=FIRST_COMPLETED)
                    for fut in done:
                        buffered[pending.pop(fut)] = fut.result()
                    while next_out in buffered:
                        for _, _, line in buffered.pop(next_out):
                            f.write(line + "\n")
                            f.flush()
                            written += 1
                        next_out += 1
        return written
    finally:
        if own:
            f.close()


# ---------------------------------------------------------------------------
# model fitting
# ---------------------------------------------------------------------------

def _read_sweep(csv_path):
    with open(csv_path) as f:
        reader = csv.DictReader(f)
        rows = list(reader)
    if not rows:
        raise InsufficientData("empty sweep CSV")
    return rows

def fit_models(csv_path, min_runs=30):
    """Fit A/eps * ln(B ln(1/eps)) and C/eps to per-eps mean q_pi.

    Brute-force grid: A in [0.5, 6] and B in [1, 12], both at step 0.01,
    minimizing the maximum relative deviation from the per-eps means; the
    one-parameter model has a closed-form minimax C.  Requires a single-
    algorithm sweep at fixed (a, delta) with >= min_runs runs per eps cell.
    """
    rows = _read_sweep(csv_path)
    algos = {r["algorithm"] for r in rows}
    a_vals = {r["a"] for r in rows}
    d_vals = {r["delta"] for r in rows}
    if len(algos) != 1 or len(a_vals) != 1 or len(d_vals) != 1:
        raise DomainError(
            f"fit needs one algorithm at fixed (a, delta); got {algos}, {a_vals}, {d_vals}")
    by_eps = {}
    for r in rows:
        by_eps.setdefault(float(r["eps"]), []).append(float(r["q_pi"]))
    for eps, qs in by_eps.items():
        if len(qs) < min_runs:
            raise InsufficientData(
                f"eps cell {eps} has {len(qs)} runs, need >= {min_runs}")
    eps = np.array(sorted(by_eps))
    means = np.array([np.mean(by_eps[e]) for e in eps])

    log_inv = np.log(1.0 / eps)
    a_grid = np.arange(0.5, 6.0 + 1e-12, 0.01)
    b_grid = np.arange(1.0, 12.0 + 1e-12, 0.01)
    # deviation tensor over (A, B, eps), reduced over eps
    inner = np.log(b_grid[:, None] * log_inv[None, :])        # (B, eps)
    pred_unit = inner / (eps[None, :] * means[None, :])       # (B, eps)
    dev = np.abs(1.0 - a_grid[:, None, None] * pred_unit[None, :, :])
    worst = dev.max(axis=2)                                   # (A, B)
    i_a, i_b = np.unravel_index(np.argmin(worst), worst.shape)
    fit_a, fit_b = float(a_grid[i_a]), float(b_grid[i_b])
    err_ab = float(worst[i_a, i_b])

    u = eps * means
    fit_c = float(2.0 * u.min() * u.max() / (u.min() + u.max()))
    err_c = float(np.max(np.abs(1.0 - fit_c / u)))
    return {
        "A": fit_a, "B": fit_b, "max_rel_err_AB": err_ab,
        "C": fit_c, "max_rel_err_C": err_c,
        "eps": [float(e) for e in eps],
        "mean_q_pi": [float(m) for m in means],
    }
