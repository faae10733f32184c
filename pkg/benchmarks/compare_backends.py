#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Asserts that both backends return bit-identical results on every workload
before timing them, since interchangeability is the whole point.

    python benchmarks/compare_backends.py
"""

import time

import numpy as np
from numpy.random import PCG64, Generator, SeedSequence

from ampest import _pykernels as pyk

try:
    from ampest import _kernels as ck
except ImportError:
    ck = None


def timed(fn, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def bench_cp(mod):
    def work():
        acc = 0.0
        for h in range(0, 1001, 7):
            lo, hi = mod.cp_interval(h, 1000, 0.01)
            acc += hi - lo
        return round(acc, 12)
    return work


def bench_cp_max(mod):
    return lambda: mod.cp_max_halfwidth(100, 0.05 / 9)


def bench_chebae(mod, eps, n_runs):
    def work():
        alpha = 0.05 / 9
        epm = mod.cp_max_halfwidth(100, alpha)
        out = []
        for i in range(n_runs):
            rng = Generator(PCG64(SeedSequence((1234, i))))
            out.append(mod.chebae_core(rng, 0.5, eps, alpha, epm, 2.0, 100,
                                       8.0, False, 10 ** 6))
        return out
    return work


def bench_clenshaw(mod):
    coeffs = np.cos(np.arange(20_000) + 0.1) / (1.0 + np.arange(20_000)) ** 2
    xs = np.linspace(-1.0, 1.0, 20_000)
    return lambda: mod.clenshaw_grid(coeffs, xs).sum().item()


def main():
    if ck is None:
        print("compiled backend not built; nothing to compare")
        return
    workloads = [
        ("cp_interval x143 (n=1000)", bench_cp),
        ("cp_max_halfwidth(100)", bench_cp_max),
        ("chebae eps=1e-3 x20", lambda m: bench_chebae(m, 1e-3, 20)),
        ("chebae eps=1e-4 x5", lambda m: bench_chebae(m, 1e-4, 5)),
        ("clenshaw_grid 20k x 20k", bench_clenshaw),
    ]
    print(f"{'workload':<28} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, make in workloads:
        out_c, t_c = timed(make(ck))
        out_p, t_p = timed(make(pyk), repeat=1)
        assert out_c == out_p, f"backend mismatch on {name}"
        print(f"{name:<28} {t_p:>9.3f}s {t_c:>9.3f}s {t_p / t_c:>7.1f}x")
    print("all outputs bit-identical across backends")


if __name__ == "__main__":
    main()
