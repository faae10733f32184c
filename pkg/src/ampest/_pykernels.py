"""Pure-Python twin of the compiled kernels in ``_kernels.pyx``.

Every function mirrors its compiled counterpart operation for operation: same
floating-point evaluation order, same fixed bisection counts, and the same
random-stream consumption (one uniform double per coin toss).  The two
backends therefore produce bit-identical results; the compiled one is just
faster.  ``ampest._backend`` picks whichever is available.
"""

import numpy as np
from math import acos, cos, cosh, exp, fabs, floor, log, log1p, pi, sqrt

from ._lftable import log_factorial_table
from .errors import IterationCap, MonotonicityViolated

BACKEND = "python"

_TWO_OVER_PI = 2.0 / pi
_HALF_PI = pi / 2.0

_lf = log_factorial_table(128)


def _lf_at(n):
    global _lf
    if _lf.shape[0] <= n:
        _lf = log_factorial_table(n)
    return _lf


def cheb_t(d, x):
    """T_d(x): cos branch on [-1,1], stable cosh continuation outside."""
    if d == 0:
        return 1.0
    if -1.0 <= x <= 1.0:
        return cos(d * acos(x))
    u = fabs(x) - 1.0
    t = d * log1p(u + sqrt(u * (u + 2.0)))
    v = cosh(t)
    if x > 0.0 or d % 2 == 0:
        return v
    return -v


def _upper_raw(h, n, p):
    # direct upward sum; only accurate when this is the smaller tail
    lf = _lf_at(n)
    lt = lf[n] - lf[h] - lf[n - h] + h * log(p) + (n - h) * log1p(-p)
    term = exp(lt)
    ratio = p / (1.0 - p)
    acc = 0.0
    for j in range(h, n + 1):
        acc += term
        if term <= acc * 1e-17:
            break
        term *= (n - j) / (j + 1.0) * ratio
    return acc


def _lower_raw(h, n, p):
    lf = _lf_at(n)
    lt = lf[n] - lf[h] - lf[n - h] + h * log(p) + (n - h) * log1p(-p)
    term = exp(lt)
    ratio = (1.0 - p) / p
    acc = 0.0
    for j in range(h, -1, -1):
        acc += term
        if term <= acc * 1e-17:
            break
        term *= j / (n - j + 1.0) * ratio
    return acc


def binom_upper_tail(h, n, p):
    """Pr[X >= h] for X ~ Binomial(n, p), exact term-recursive sum.

    Sums whichever tail is the small one and complements otherwise, so the
    startup term never underflows on the side that matters.
    """
    if h <= 0:
        return 1.0
    if h > n:
        return 0.0
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    if h > n * p:
        return _upper_raw(h, n, p)
    return 1.0 - _lower_raw(h - 1, n, p)


def binom_lower_tail(h, n, p):
    """Pr[X <= h] for X ~ Binomial(n, p)."""
    if h >= n:
        return 1.0
    if h < 0:
        return 0.0
    if p <= 0.0:
        return 1.0
    if p >= 1.0:
        return 0.0
    if h < n * p:
        return _lower_raw(h, n, p)
    return 1.0 - _upper_raw(h + 1, n, p)


def cp_interval(heads, flips, alpha):
    """Exact two-sided Clopper-Pearson interval by tail bisection."""
    target = 0.5 * alpha
    if heads == 0:
        lo = 0.0
    else:
        x0, x1 = 0.0, 1.0
        for _ in range(50):
            xm = 0.5 * (x0 + x1)
            if binom_upper_tail(heads, flips, xm) < target:
                x0 = xm
            else:
                x1 = xm
        lo = 0.5 * (x0 + x1)
    if heads == flips:
        hi = 1.0
    else:
        x0, x1 = 0.0, 1.0
        for _ in range(50):
            xm = 0.5 * (x0 + x1)
            if binom_lower_tail(heads, flips, xm) > target:
                x0 = xm
            else:
                x1 = xm
        hi = 0.5 * (x0 + x1)
    return lo, hi


def cp_max_halfwidth(flips, alpha):
    """Worst-case CP halfwidth over all head counts, by full enumeration."""
    worst = 0.0
    for h in range(flips + 1):
        lo, hi = cp_interval(h, flips, alpha)
        w = 0.5 * (hi - lo)
        if w > worst:
            worst = w
    return worst


def find_next_cheb(a_lo, a_hi):
    """Highest degree whose squared Chebyshev is extremum-free on [a_lo, a_hi]."""
    th_min = acos(a_hi)
    th_max = acos(a_lo)
    span = th_max - th_min
    if span <= 0.0:
        return 1
    d = int(floor(_HALF_PI / span))
    while d >= 2:
        if floor(_TWO_OVER_PI * d * th_min) == floor(_TWO_OVER_PI * d * th_max):
            break
        d -= 1
    if d < 1:
        d = 1
    return d


def invert_cheb(d, p_lo, p_hi, a_lo, a_hi):
    """Preimage of [p_lo, p_hi] under a -> T_d(a)^2 restricted to [a_lo, a_hi]."""
    # extremum strictly inside iff some multiple of pi/2 lies in (d*th_min, d*th_max)
    t_min = d * acos(a_hi)
    t_max = d * acos(a_lo)
    m = floor(t_max / _HALF_PI)
    if m * _HALF_PI >= t_max:
        m -= 1
    if m * _HALF_PI > t_min:
        raise MonotonicityViolated(
            f"T_{d}^2 has an extremum inside [{a_lo}, {a_hi}]")
    t = cheb_t(d, a_lo)
    f_lo = t * t
    t = cheb_t(d, a_hi)
    f_hi = t * t
    inc = f_hi >= f_lo
    if inc:
        t_lo, t_hi = p_lo, p_hi
    else:
        t_lo, t_hi = p_hi, p_lo
    f_min = f_lo if f_lo < f_hi else f_hi
    f_max = f_lo if f_lo > f_hi else f_hi

    def solve(target):
        if target <= f_min:
            return a_lo if inc else a_hi
        if target >= f_max:
            return a_hi if inc else a_lo
        x0, x1 = a_lo, a_hi
        for _ in range(60):
            xm = 0.5 * (x0 + x1)
            v = cheb_t(d, xm)
            v = v * v
            if (v < target) == inc:
                x0 = xm
            else:
                x1 = xm
        return 0.5 * (x0 + x1)

    out_lo = solve(t_lo)
    out_hi = solve(t_hi)
    if out_lo > out_hi:
        out_lo, out_hi = out_hi, out_lo
    return out_lo, out_hi


def toss_batch(rng, p, n):
    """n Bernoulli(p) tosses, one uniform double each; returns the head count."""
    u = rng.random(n)
    return int(np.count_nonzero(u < p))


def chebae_core(rng, a, eps, alpha, eps_p_max, r, n_shots, nu, tracked, toss_cap):
    """Inner interval-refinement loop of the Chebyshev estimator.

    Returns (a_lo, a_hi, q_psi, q_pi, d_max, d_total, tosses, iterations,
    state) where state is the 2-bit label code in tracked mode and -1 in
    destructive mode.
    """
    a_lo, a_hi = 0.0, 1.0
    heads = 0
    flips = 0
    d = 1
    q_psi = 0
    q_pi = 0
    d_max = 0
    d_total = 0
    tosses = 0
    iters = 0
    state = 0
    while a_hi - a_lo >= 2.0 * eps:
        iters += 1
        d_new = find_next_cheb(a_lo, a_hi)
        if d_new >= r * d:
            heads = 0
            flips = 0
            d = d_new
        t_lo = cheb_t(d, a_lo)
        t_hi = cheb_t(d, a_hi)
        denom = fabs(t_hi - t_lo)
        late = denom < 1e-300 or eps_p_max * (a_hi - a_lo) / denom <= eps * nu
        n = 1 if late else n_shots
        if tosses + n > toss_cap:
            raise IterationCap(f"toss cap {toss_cap} exceeded")
        pa = cheb_t(d, a)
        p2 = pa * pa
        k = d >> 1
        if tracked:
            if d & 1:
                n_first = (n + 1) >> 1
                n_second = n >> 1
                if (state >> 1) == 0:
                    n_psi_in, n_pi_in = n_first, n_second
                else:
                    n_psi_in, n_pi_in = n_second, n_first
                q_psi += k * n_psi_in + (k + 1) * n_pi_in
                q_pi += (k + 1) * n_psi_in + k * n_pi_in
            else:
                q_psi += k * n
                q_pi += k * n
            h = toss_batch(rng, p2, n)
            if (d & 1) and (n & 1):
                state ^= 2
            if (n - h) & 1:
                state ^= 1
        else:
            if d & 1:
                q_psi += k * n
                q_pi += (k + 1) * n
            else:
                q_psi += k * n
                q_pi += k * n
            h = toss_batch(rng, p2, n)
        heads += h
        flips += n
        d_total += d * n
        tosses += n
        if d > d_max:
            d_max = d
        p_lo, p_hi = cp_interval(heads, flips, alpha)
        s_lo, s_hi = invert_cheb(d, p_lo, p_hi, a_lo, a_hi)
        if s_lo > a_lo:
            a_lo = s_lo
        if s_hi < a_hi:
            a_hi = s_hi
    return (a_lo, a_hi, q_psi, q_pi, d_max, d_total, tosses, iters,
            state if tracked else -1)


def clenshaw_scalar(coeffs, x):
    """Evaluate a Chebyshev series at one point."""
    c = coeffs
    m = len(c)
    b1 = 0.0
    b2 = 0.0
    for j in range(m - 1, 0, -1):
        b0 = 2.0 * x * b1 - b2 + c[j]
        b2 = b1
        b1 = b0
    return x * b1 - b2 + c[0]


def clenshaw_grid(coeffs, xs):
    """Evaluate a Chebyshev series on an array of points."""
    c = np.ascontiguousarray(coeffs, dtype=np.float64)
    x = np.ascontiguousarray(xs, dtype=np.float64).ravel()
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for j in range(len(c) - 1, 0, -1):
        b0 = 2.0 * x * b1 - b2 + c[j]
        b2 = b1
        b1 = b0
    return x * b1 - b2 + c[0]
