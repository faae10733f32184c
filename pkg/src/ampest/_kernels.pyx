# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: exact binomial tails, Chebyshev evaluation, interval
inversion, coin-toss batches and the Chebyshev-estimator inner loop.

Must stay operation-for-operation identical to ``_pykernels.py`` (same float
evaluation order, same bisection counts, same random-stream consumption) so
that the two backends are interchangeable bit for bit.
"""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport acos, cos, cosh, exp, fabs, floor, log, log1p, sqrt
from numpy.random cimport bitgen_t

from ._lftable import log_factorial_table
from .errors import IterationCap, MonotonicityViolated

BACKEND = "compiled"

cdef double _PI = 3.141592653589793
cdef double _TWO_OVER_PI = 2.0 / 3.141592653589793
cdef double _HALF_PI = 3.141592653589793 / 2.0

cdef const char *_CAPSULE = "BitGenerator"

cdef object _lf_obj = log_factorial_table(128)
cdef double[::1] _lf = _lf_obj


cdef double[::1] _lf_at(long n):
    global _lf_obj, _lf
    if _lf.shape[0] <= n:
        _lf_obj = log_factorial_table(n)
        _lf = _lf_obj
    return _lf


cdef bitgen_t *_bitgen(object rng) except NULL:
    capsule = rng.bit_generator.capsule
    return <bitgen_t *> PyCapsule_GetPointer(capsule, _CAPSULE)


cdef double _cheb_t(long d, double x) noexcept:
    cdef double u, t, v
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


def cheb_t(long d, double x):
    """T_d(x): cos branch on [-1,1], stable cosh continuation outside."""
    return _cheb_t(d, x)


cdef double _upper_raw(long h, long n, double p):
    # direct upward sum; only accurate when this is the smaller tail
    cdef double lt, term, ratio, acc
    cdef long j
    cdef double[::1] lf = _lf_at(n)
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


cdef double _lower_raw(long h, long n, double p):
    cdef double lt, term, ratio, acc
    cdef long j
    cdef double[::1] lf = _lf_at(n)
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


cdef double _upper_tail(long h, long n, double p):
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


cdef double _lower_tail(long h, long n, double p):
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


def binom_upper_tail(long h, long n, double p):
    """Pr[X >= h] for X ~ Binomial(n, p), exact term-recursive sum."""
    return _upper_tail(h, n, p)


def binom_lower_tail(long h, long n, double p):
    """Pr[X <= h] for X ~ Binomial(n, p)."""
    return _lower_tail(h, n, p)


cdef (double, double) _cp_interval(long heads, long flips, double alpha) except *:
    cdef double target = 0.5 * alpha
    cdef double lo, hi, x0, x1, xm
    cdef int i
    if heads == 0:
        lo = 0.0
    else:
        x0 = 0.0
        x1 = 1.0
        for i in range(50):
            xm = 0.5 * (x0 + x1)
            if _upper_tail(heads, flips, xm) < target:
                x0 = xm
            else:
                x1 = xm
        lo = 0.5 * (x0 + x1)
    if heads == flips:
        hi = 1.0
    else:
        x0 = 0.0
        x1 = 1.0
        for i in range(50):
            xm = 0.5 * (x0 + x1)
            if _lower_tail(heads, flips, xm) > target:
                x0 = xm
            else:
                x1 = xm
        hi = 0.5 * (x0 + x1)
    return lo, hi


def cp_interval(long heads, long flips, double alpha):
    """Exact two-sided Clopper-Pearson interval by tail bisection."""
    cdef (double, double) out = _cp_interval(heads, flips, alpha)
    return out[0], out[1]


def cp_max_halfwidth(long flips, double alpha):
    """Worst-case CP halfwidth over all head counts, by full enumeration."""
    cdef double worst = 0.0, w
    cdef (double, double) iv
    cdef long h
    for h in range(flips + 1):
        iv = _cp_interval(h, flips, alpha)
        w = 0.5 * (iv[1] - iv[0])
        if w > worst:
            worst = w
    return worst


cdef long _find_next_cheb(double a_lo, double a_hi) noexcept:
    cdef double th_min = acos(a_hi)
    cdef double th_max = acos(a_lo)
    cdef double span = th_max - th_min
    cdef long d
    if span <= 0.0:
        return 1
    d = <long> floor(_HALF_PI / span)
    while d >= 2:
        if floor(_TWO_OVER_PI * d * th_min) == floor(_TWO_OVER_PI * d * th_max):
            break
        d -= 1
    if d < 1:
        d = 1
    return d


def find_next_cheb(double a_lo, double a_hi):
    """Highest degree whose squared Chebyshev is extremum-free on [a_lo, a_hi]."""
    return _find_next_cheb(a_lo, a_hi)


cdef double _invert_solve(long d, double target, double a_lo, double a_hi,
                          double f_min, double f_max, bint inc) noexcept:
    cdef double x0, x1, xm, v
    cdef int i
    if target <= f_min:
        return a_lo if inc else a_hi
    if target >= f_max:
        return a_hi if inc else a_lo
    x0 = a_lo
    x1 = a_hi
    for i in range(60):
        xm = 0.5 * (x0 + x1)
        v = _cheb_t(d, xm)
        v = v * v
        if (v < target) == inc:
            x0 = xm
        else:
            x1 = xm
    return 0.5 * (x0 + x1)


def invert_cheb(long d, double p_lo, double p_hi, double a_lo, double a_hi):
    """Preimage of [p_lo, p_hi] under a -> T_d(a)^2 restricted to [a_lo, a_hi]."""
    cdef double t, f_lo, f_hi, f_min, f_max, t_lo, t_hi, out_lo, out_hi
    cdef double t_min, t_max, m
    cdef bint inc
    # extremum strictly inside iff some multiple of pi/2 lies in (d*th_min, d*th_max)
    t_min = d * acos(a_hi)
    t_max = d * acos(a_lo)
    m = floor(t_max / _HALF_PI)
    if m * _HALF_PI >= t_max:
        m -= 1.0
    if m * _HALF_PI > t_min:
        raise MonotonicityViolated(
            f"T_{d}^2 has an extremum inside [{a_lo}, {a_hi}]")
    t = _cheb_t(d, a_lo)
    f_lo = t * t
    t = _cheb_t(d, a_hi)
    f_hi = t * t
    inc = f_hi >= f_lo
    if inc:
        t_lo = p_lo
        t_hi = p_hi
    else:
        t_lo = p_hi
        t_hi = p_lo
    f_min = f_lo if f_lo < f_hi else f_hi
    f_max = f_lo if f_lo > f_hi else f_hi
    out_lo = _invert_solve(d, t_lo, a_lo, a_hi, f_min, f_max, inc)
    out_hi = _invert_solve(d, t_hi, a_lo, a_hi, f_min, f_max, inc)
    if out_lo > out_hi:
        out_lo, out_hi = out_hi, out_lo
    return out_lo, out_hi


cdef long _toss_batch(bitgen_t *bg, double p, long n) noexcept:
    cdef long h = 0
    cdef long i
    for i in range(n):
        if bg.next_double(bg.state) < p:
            h += 1
    return h


def toss_batch(object rng, double p, long n):
    """n Bernoulli(p) tosses, one uniform double each; returns the head count."""
    cdef bitgen_t *bg = _bitgen(rng)
    return _toss_batch(bg, p, n)


def chebae_core(object rng, double a, double eps, double alpha,
                double eps_p_max, double r, long n_shots, double nu,
                bint tracked, long toss_cap):
    """Inner interval-refinement loop of the Chebyshev estimator.

    Returns (a_lo, a_hi, q_psi, q_pi, d_max, d_total, tosses, iterations,
    state) where state is the 2-bit label code in tracked mode and -1 in
    destructive mode.
    """
    cdef bitgen_t *bg = _bitgen(rng)
    cdef double a_lo = 0.0, a_hi = 1.0
    cdef long heads = 0, flips = 0, d = 1, d_new, n, h, k
    cdef long q_psi = 0, q_pi = 0, d_max = 0, d_total = 0, tosses = 0, iters = 0
    cdef long n_first, n_second, n_psi_in, n_pi_in
    cdef int state = 0
    cdef double t_lo, t_hi, denom, pa, p2, s_lo, s_hi
    cdef (double, double) p_iv
    cdef bint late
    while a_hi - a_lo >= 2.0 * eps:
        iters += 1
        d_new = _find_next_cheb(a_lo, a_hi)
        if d_new >= r * d:
            heads = 0
            flips = 0
            d = d_new
        t_lo = _cheb_t(d, a_lo)
        t_hi = _cheb_t(d, a_hi)
        denom = fabs(t_hi - t_lo)
        late = denom < 1e-300 or eps_p_max * (a_hi - a_lo) / denom <= eps * nu
        n = 1 if late else n_shots
        if tosses + n > toss_cap:
            raise IterationCap(f"toss cap {toss_cap} exceeded")
        pa = _cheb_t(d, a)
        p2 = pa * pa
        k = d >> 1
        if tracked:
            if d & 1:
                n_first = (n + 1) >> 1
                n_second = n >> 1
                if (state >> 1) == 0:
                    n_psi_in = n_first
                    n_pi_in = n_second
                else:
                    n_psi_in = n_second
                    n_pi_in = n_first
                q_psi += k * n_psi_in + (k + 1) * n_pi_in
                q_pi += (k + 1) * n_psi_in + k * n_pi_in
            else:
                q_psi += k * n
                q_pi += k * n
            h = _toss_batch(bg, p2, n)
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
            h = _toss_batch(bg, p2, n)
        heads += h
        flips += n
        d_total += d * n
        tosses += n
        if d > d_max:
            d_max = d
        p_iv = _cp_interval(heads, flips, alpha)
        s_lo, s_hi = invert_cheb(d, p_iv[0], p_iv[1], a_lo, a_hi)
        if s_lo > a_lo:
            a_lo = s_lo
        if s_hi < a_hi:
            a_hi = s_hi
    return (a_lo, a_hi, q_psi, q_pi, d_max, d_total, tosses, iters,
            state if tracked else -1)


def clenshaw_scalar(cnp.ndarray[cnp.float64_t, ndim=1] coeffs, double x):
    """Evaluate a Chebyshev series at one point."""
    cdef double b0, b1 = 0.0, b2 = 0.0
    cdef Py_ssize_t j
    for j in range(coeffs.shape[0] - 1, 0, -1):
        b0 = 2.0 * x * b1 - b2 + coeffs[j]
        b2 = b1
        b1 = b0
    return x * b1 - b2 + coeffs[0]


def clenshaw_grid(object coeffs, object xs):
    """Evaluate a Chebyshev series on an array of points."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x = np.ascontiguousarray(xs, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty_like(x)
    cdef Py_ssize_t i, j, m = c.shape[0], npts = x.shape[0]
    cdef double b0, b1, b2, xi
    for i in range(npts):
        xi = x[i]
        b1 = 0.0
        b2 = 0.0
        for j in range(m - 1, 0, -1):
            b0 = 2.0 * xi * b1 - b2 + c[j]
            b2 = b1
            b1 = b0
        out[i] = xi * b1 - b2 + c[0]
    return out
