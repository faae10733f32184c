"""The compiled and pure backends must be interchangeable bit for bit."""

import os
import subprocess
import sys

import numpy as np
import pytest

from ampest import _pykernels as pyk
from conftest import fresh_rng

compiled = pytest.importorskip("ampest._kernels")


def test_backend_names():
    assert compiled.BACKEND == "compiled"
    assert pyk.BACKEND == "python"


def test_cheb_t_identical(rng):
    for _ in range(500):
        d = int(rng.integers(0, 80))
        x = float(rng.uniform(-3.0, 3.0))
        assert compiled.cheb_t(d, x) == pyk.cheb_t(d, x)


def test_tails_identical(rng):
    for _ in range(300):
        n = int(rng.integers(1, 5000))
        h = int(rng.integers(0, n + 1))
        p = float(rng.random())
        assert compiled.binom_upper_tail(h, n, p) == pyk.binom_upper_tail(h, n, p)
        assert compiled.binom_lower_tail(h, n, p) == pyk.binom_lower_tail(h, n, p)


def test_cp_identical(rng):
    for _ in range(100):
        n = int(rng.integers(1, 3000))
        h = int(rng.integers(0, n + 1))
        alpha = float(rng.uniform(0.001, 0.3))
        assert compiled.cp_interval(h, n, alpha) == pyk.cp_interval(h, n, alpha)
    assert compiled.cp_max_halfwidth(100, 0.05 / 9) == pyk.cp_max_halfwidth(100, 0.05 / 9)


def test_interval_helpers_identical(rng):
    for _ in range(300):
        lo = float(rng.uniform(0.0, 0.98))
        hi = float(rng.uniform(lo + 1e-6, 1.0))
        d = compiled.find_next_cheb(lo, hi)
        assert d == pyk.find_next_cheb(lo, hi)
        p_lo = float(rng.uniform(0.0, 0.5))
        p_hi = float(rng.uniform(p_lo, 1.0))
        assert (compiled.invert_cheb(d, p_lo, p_hi, lo, hi)
                == pyk.invert_cheb(d, p_lo, p_hi, lo, hi))


def test_toss_batch_identical():
    for seed in range(5):
        g1, g2 = fresh_rng(81, seed), fresh_rng(81, seed)
        assert compiled.toss_batch(g1, 0.37, 5000) == pyk.toss_batch(g2, 0.37, 5000)
        # streams stay aligned afterwards
        assert g1.random() == g2.random()


@pytest.mark.parametrize("tracked", [False, True])
@pytest.mark.parametrize("a", [0.05, 0.5, 0.93])
def test_chebae_core_identical(tracked, a):
    alpha = 0.05 / 9
    epm = compiled.cp_max_halfwidth(100, alpha)
    for seed in range(4):
        g1, g2 = fresh_rng(82, seed), fresh_rng(82, seed)
        r1 = compiled.chebae_core(g1, a, 1e-3, alpha, epm, 2.0, 100, 8.0,
                                  tracked, 10 ** 6)
        r2 = pyk.chebae_core(g2, a, 1e-3, alpha, epm, 2.0, 100, 8.0,
                             tracked, 10 ** 6)
        assert r1 == r2


def test_clenshaw_identical(rng):
    coeffs = rng.standard_normal(300)
    xs = np.linspace(-1, 1, 777)
    assert np.array_equal(compiled.clenshaw_grid(coeffs, xs),
                          pyk.clenshaw_grid(coeffs, xs))
    for x in (-0.99, 0.0, 0.31, 1.0):
        assert compiled.clenshaw_scalar(np.ascontiguousarray(coeffs), x) \
            == pyk.clenshaw_scalar(coeffs, x)


def test_pure_python_env_forces_fallback():
    code = ("import ampest; print(ampest.BACKEND)")
    env = dict(os.environ, AMPEST_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, env=env)
    assert out.stdout.strip() == "python"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, env=dict(os.environ, AMPEST_PURE_PYTHON="0"))
    assert out.stdout.strip() == "compiled"


def test_full_estimator_identical_across_backends(tmp_path):
    # a sweep produced under the fallback matches the compiled one byte for
    # byte (wall_us aside)
    script = (
        "import io\n"
        "from ampest.harness import SweepConfig, run_sweep\n"
        "buf = io.StringIO()\n"
        "cfg = SweepConfig(algorithm='chebae',"
        " grid={'a': [0.4], 'eps': [3e-3], 'delta': [0.05]}, runs=6, seed=5)\n"
        "run_sweep(cfg, stream=buf)\n"
        "rows = [','.join(r.split(',')[:-1]) for r in buf.getvalue().splitlines()]\n"
        "print('\\n'.join(rows))\n"
    )
    outs = {}
    for flag in ("0", "1"):
        env = dict(os.environ, AMPEST_PURE_PYTHON=flag)
        res = subprocess.run([sys.executable, "-c", script], env=env,
                             capture_output=True, text=True)
        assert res.returncode == 0, res.stderr
        outs[flag] = res.stdout
    assert outs["0"] == outs["1"]
