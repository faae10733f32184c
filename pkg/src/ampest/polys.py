"""Polynomial families with coin-sampling semantics.

Each family is packaged as a PolySpec: a fixed-parity polynomial with a value
evaluator P(x) (when one exists), a squared-magnitude evaluator p2(x) in
[0, 1], and a dense-grid certificate where a construction has an error bound
to meet.  Two kinds are distinguished: 'pellian' polynomials are realizable
by alternating reflections and phase rotations directly; 'semi-pellian' ones
(fixed parity, |P| <= 1 on [-1, 1]) need the flag-qubit construction and are
sampled destructively.

Approximant families (line, erf, hybrid) are built by Chebyshev interpolation
of a target followed by certificate verification, escalating the degree by
1.25x until the certificate passes.  Targets are pre-scaled slightly below 1
so the interpolant stays bounded by 1 without clamping.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _backend as bk
from .errors import ConstructionFailed, DomainError, PreconditionViolated

_BOUND_SLACK = 5e-10  # |P| <= 1 + slack keeps p2 clamp events below 1e-9


# ---------------------------------------------------------------------------
# Chebyshev series infrastructure
# ---------------------------------------------------------------------------

def cheb_nodes(n):
    """n Chebyshev points of the first kind, cos(pi (k+1/2) / n)."""
    k = np.arange(n)
    return np.cos(np.pi * (k + 0.5) / n)


def cheb_interp_coeffs(values):
    """Series coefficients from values at cheb_nodes(len(values)), via FFT.

    Returns c with P(x) = sum_j c[j] T_j(x) interpolating the values.
    """
    v = np.asarray(values, dtype=np.float64)
    n = v.shape[0]
    phase = np.exp(-1j * np.pi * np.arange(n) / (2 * n))
    spectrum = np.fft.fft(np.concatenate([v, v[::-1]]))[:n]
    c = np.real(phase * spectrum) / n
    c[0] *= 0.5
    return c


def cheb_eval_at_cheb_grid(coeffs, m):
    """Evaluate a series at cheb_nodes(m) in O(m log m); needs m >= len(coeffs)."""
    c = np.asarray(coeffs, dtype=np.float64)
    if m < c.shape[0]:
        raise DomainError("evaluation grid smaller than the series")
    z = np.zeros(2 * m, dtype=complex)
    z[:c.shape[0]] = c * np.exp(1j * np.pi * np.arange(c.shape[0]) / (2 * m))
    return np.real(2 * m * np.fft.ifft(z)[:m])


# ---------------------------------------------------------------------------
# erf ground truth by quadrature
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
_ERF_TAIL_CUT = 28.0  # exp(-t^2) underflows well before |t| = 28


def erf_reference(xs):
    """erf by composite Gauss-Legendre quadrature of the Gaussian integrand.

    Sorts the evaluation points, splits every gap into 16-point panels of
    width <= 1/2 (truncating past the Gaussian's underflow), and prefix-sums
    the panel integrals; accurate to ~1e-15 and independent of any library
    erf.  Fully vectorized over panels.
    """
    x = np.asarray(xs, dtype=np.float64)
    flat = np.abs(x.ravel())
    order = np.argsort(flat, kind="stable")
    pts = np.minimum(flat[order], _ERF_TAIL_CUT)
    edges = np.concatenate([[0.0], pts])
    gap_lo = edges[:-1]
    gap_w = np.diff(edges)
    counts = np.maximum(np.ceil(gap_w / 0.5).astype(np.int64), 1)
    counts[gap_w <= 0.0] = 0
    total = int(counts.sum())
    gaps = np.zeros(flat.size)
    if total:
        rep_lo = np.repeat(gap_lo, counts)
        rep_w = np.repeat(gap_w / np.maximum(counts, 1), counts)
        offsets = np.arange(total) - np.repeat(
            np.concatenate([[0], np.cumsum(counts[:-1])]), counts)
        p_lo = rep_lo + rep_w * offsets
        mid = p_lo + 0.5 * rep_w
        half = 0.5 * rep_w
        t = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        panel = np.sum(half[:, None] * _GL_WEIGHTS[None, :] * np.exp(-t * t),
                       axis=1)
        nz = counts > 0
        gap_starts = np.concatenate([[0], np.cumsum(counts[:-1])])
        gaps[nz] = np.add.reduceat(panel, gap_starts[nz])
    cum = np.minimum(np.cumsum(gaps) * (2.0 / math.sqrt(math.pi)), 1.0)
    out = np.empty_like(flat)
    out[order] = cum
    return (np.sign(x.ravel()) * out).reshape(x.shape)


# ---------------------------------------------------------------------------
# PolySpec and certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SupNormCertificate:
    """Dense-grid numerical evidence that a construction met its bound."""

    grid_size: int
    max_error: float
    bound: float
    passed: bool


@dataclass
class PolySpec:
    """A fixed-parity polynomial usable for coin sampling.

    Immutable after construction; `value` is None for magnitude-only
    families.  `value_grid` vectorizes `value` when available.
    """

    family: str
    kind: str                      # 'pellian' | 'semi-pellian'
    parity: str                    # 'even' | 'odd'
    degree: int
    params: dict
    p2: Callable[[float], float]
    value: Optional[Callable[[float], float]] = None
    value_grid: Optional[Callable[[np.ndarray], np.ndarray]] = None
    certificate: Optional[SupNormCertificate] = None


def verify_semi_pellian(spec, grid_points=None):
    """Grid check of |P| <= 1 + 1e-9 and fixed parity for a value family."""
    if spec.value is None:
        raise DomainError(f"family {spec.family!r} has no value evaluator")
    if grid_points is None:
        grid_points = max(10 * spec.degree, 200)
    xs = np.linspace(-1.0, 1.0, grid_points)
    if spec.value_grid is not None:
        vals = spec.value_grid(xs)
    else:
        vals = np.array([spec.value(float(x)) for x in xs])
    max_abs = float(np.max(np.abs(vals)))
    sign = 1.0 if spec.parity == "even" else -1.0
    parity_err = float(np.max(np.abs(vals - sign * vals[::-1])))
    passed = max_abs <= 1.0 + 1e-9 and parity_err <= 1e-9
    return SupNormCertificate(grid_points, max_abs, 1.0 + 1e-9, passed)


def _clip01(v):
    if v < 0.0:
        return 0.0
    if v > 1.0:
        return 1.0
    return v


# ---------------------------------------------------------------------------
# Chebyshev / monomial / fixed-point families (closed-form evaluators)
# ---------------------------------------------------------------------------

def cheb_T(d, x):
    """T_d(x) via cos(d acos x) on [-1,1] and the cosh continuation outside."""
    if d < 0:
        raise DomainError(f"degree must be >= 0, got {d}")
    return bk.cheb_t(d, x)


def build_chebyshev(d):
    """Pellian spec for T_d; rejects d = 0 (no fixed-parity sampling use)."""
    if d < 1:
        raise DomainError(f"degree must be >= 1, got {d}")

    def value(x, _d=d):
        return bk.cheb_t(_d, x)

    def p2(x, _d=d):
        t = bk.cheb_t(_d, x)
        return _clip01(t * t)

    return PolySpec(
        family="chebyshev", kind="pellian",
        parity="odd" if d % 2 else "even", degree=int(d),
        params={"d": int(d)}, p2=p2, value=value,
        value_grid=lambda xs, _d=d: np.array([bk.cheb_t(_d, float(x)) for x in xs]),
    )


def build_monomial():
    """P(a) = a, the degree-1 coin; named because the repair step asks for it."""
    spec = build_chebyshev(1)
    spec.family = "monomial"
    return spec


def _log_cheb_above_one(l, t):
    # log T_l(z) for z > 1 given t = arccosh(z); T_l = cosh(l t)
    lt = l * t
    return lt + math.log1p(math.exp(-2.0 * lt)) - math.log(2.0)


def build_repair_pair(kappa, eta):
    """Fixed-point pair (J, K) for state restoration.

    J(x) = T_l(x/g)/T_l(1/g) with g = sqrt(1-kappa^2) and l the smallest odd
    integer >= ln(2/sqrt(eta))/kappa; |J|^2 < eta for |x| < g.  K is the
    magnitude-only partner with |K(x)|^2 = 1 - |J(xbar)|^2, which exceeds
    1 - eta for |x| > kappa.
    """
    if not 0.0 < kappa < 1.0:
        raise DomainError(f"kappa must be in (0, 1), got {kappa}")
    if not 0.0 < eta < 1.0:
        raise DomainError(f"eta must be in (0, 1), got {eta}")
    target = math.log(2.0 / math.sqrt(eta)) / kappa
    l = int(math.ceil(target))
    if l % 2 == 0:
        l += 1
    gamma = math.sqrt(max(0.0, (1.0 - kappa) * (1.0 + kappa)))
    # arccosh(1/gamma) = atanh(kappa), stable for kappa near 0
    t_den = math.atanh(kappa)
    log_den = _log_cheb_above_one(l, t_den)

    def j_value(x, _l=l, _g=gamma, _k=kappa, _log_den=log_den):
        ax = abs(x)
        # arccosh(ax/g) = atanh(sqrt(kappa^2 - (1-ax^2))/ax), sharing the
        # exact kappa with the denominator so J(+-1) = +-1 to the last ulp
        u2 = _k * _k - (1.0 - ax) * (1.0 + ax)
        if ax <= _g or u2 <= 0.0:
            w = x / _g
            w = 1.0 if w > 1.0 else (-1.0 if w < -1.0 else w)
            return math.cos(_l * math.acos(w)) * math.exp(-_log_den)
        t = math.atanh(math.sqrt(u2) / ax)
        v = math.exp(_log_cheb_above_one(_l, t) - _log_den)
        return v if x > 0.0 else -v

    def j_p2(x):
        v = j_value(x)
        return _clip01(v * v)

    def k_p2(x):
        xbar = math.sqrt(max(0.0, (1.0 - x) * (1.0 + x)))
        return _clip01(1.0 - j_p2(xbar))

    params = {"kappa": kappa, "eta": eta, "gamma": gamma, "l": l}
    j_spec = PolySpec(
        family="fixed-point-j", kind="pellian", parity="odd", degree=l,
        params=dict(params), p2=j_p2, value=j_value,
        value_grid=lambda xs: np.array([j_value(float(x)) for x in xs]),
    )
    k_spec = PolySpec(
        family="fixed-point-k", kind="pellian", parity="odd", degree=l,
        params=dict(params), p2=k_p2,
    )
    return j_spec, k_spec


# ---------------------------------------------------------------------------
# Line polynomial (interval-refinement coin)
# ---------------------------------------------------------------------------

def build_line_poly(a_min, a_max, eta, mode="polynomial", delta_for_degree=None):
    """Even polynomial whose square tracks (x - a_min)/delta on [a_min, a_max].

    'polynomial' mode interpolates sqrt(c * ramp) and verifies the p2-scale
    band error <= eta plus |P| <= 1 on a dense grid, escalating the degree
    from ceil(1/(eta*delta)) by 1.25x up to an 8x cap.  'ideal' mode returns
    the exact clipped ramp as a fictitious spec of the starting degree, for
    fast statistical runs.  `delta_for_degree` lets a caller pin the degree
    law to its nominal interval width when float drift perturbs the endpoints.
    """
    # closed endpoints allowed: the estimators' first rounds start at [0, 1]
    if not 0.0 <= a_min < a_max <= 1.0:
        raise DomainError(f"need 0 <= a_min < a_max <= 1, got [{a_min}, {a_max}]")
    if not 0.0 < eta < 1.0:
        raise DomainError(f"eta must be in (0, 1), got {eta}")
    delta = a_max - a_min
    d0 = int(math.ceil(1.0 / (eta * (delta_for_degree or delta))))
    params = {"a_min": a_min, "a_max": a_max, "eta": eta, "delta": delta,
              "proof_degree": d0}

    if mode == "ideal":
        def p2(x, _lo=a_min, _w=delta):
            return _clip01((x - _lo) / _w)
        return PolySpec(family="line", kind="semi-pellian", parity="even",
                        degree=d0, params=dict(params, mode="ideal"), p2=p2)
    if mode != "polynomial":
        raise DomainError(f"unknown mode {mode!r}")

    c_scale = 1.0 / (1.0 + 0.5 * eta)
    d = d0
    last = None
    while d <= 8 * d0:
        nodes = cheb_nodes(d + 1)
        ramp = np.clip((np.abs(nodes) - a_min) / delta, 0.0, 1.0)
        coeffs = cheb_interp_coeffs(np.sqrt(c_scale * ramp))
        coeffs[1::2] = 0.0
        band = np.linspace(a_min, a_max, max(10 * d, 200))
        pb = bk.clenshaw_grid(coeffs, band)
        band_err = float(np.max(np.abs(pb * pb - (band - a_min) / delta)))
        full = np.linspace(-1.0, 1.0, max(10 * d, 200))
        max_abs = float(np.max(np.abs(bk.clenshaw_grid(coeffs, full))))
        last = SupNormCertificate(band.size, band_err, eta,
                                  band_err <= eta and max_abs <= 1.0 + _BOUND_SLACK)
        if last.passed:
            def value(x, _c=coeffs):
                return bk.clenshaw_scalar(_c, x)

            def p2(x, _c=coeffs):
                v = bk.clenshaw_scalar(_c, x)
                return _clip01(v * v)

            return PolySpec(
                family="line", kind="semi-pellian", parity="even", degree=d,
                params=dict(params, mode="polynomial", c_scale=c_scale),
                p2=p2, value=value,
                value_grid=lambda xs, _c=coeffs: bk.clenshaw_grid(_c, xs),
                certificate=last,
            )
        d = int(math.ceil(1.25 * d))
    raise ConstructionFailed(
        f"line polynomial on [{a_min}, {a_max}] failed its certificate up to "
        f"degree {8 * d0} (last: {last})")


# ---------------------------------------------------------------------------
# erf approximant and the threshold (hybrid) transform
# ---------------------------------------------------------------------------

def erf_degree_estimate(k, eta):
    """Starting odd degree from the O(sqrt((k^2+log(1/eta)) log(1/eta))) bound."""
    lg = math.log(1.0 / eta)
    d = max(3, int(math.ceil(math.sqrt((k * k + lg) * lg))))
    return d + 1 if d % 2 == 0 else d


def build_erf_poly(k, eta):
    """Odd approximant of erf(kx) on [-2, 2] with certified sup error <= eta.

    Interpolates the slightly shrunk target erf(kx)*(1 - eta/2) (headroom
    that keeps |P| <= 1), zeroes even coefficients, and escalates the degree
    by 1.25x (kept odd) until the certificate against the quadrature erf
    passes; 16x cap.
    """
    if k < 1.0:
        raise DomainError(f"k must be >= 1, got {k}")
    if not 0.0 < eta < 1.0:
        raise DomainError(f"eta must be in (0, 1), got {eta}")
    d0 = erf_degree_estimate(k, eta)
    shrink = 1.0 - 0.5 * eta
    d = d0
    last = None
    while d <= 16 * d0:
        nodes = cheb_nodes(d + 1)
        coeffs = cheb_interp_coeffs(shrink * erf_reference(2.0 * k * nodes))
        coeffs[0::2] = 0.0
        m = max(10 * d, 400)
        grid_u = cheb_nodes(m)
        vals = cheb_eval_at_cheb_grid(coeffs, m)
        err = float(np.max(np.abs(vals - erf_reference(2.0 * k * grid_u))))
        max_abs = float(np.max(np.abs(vals)))
        last = SupNormCertificate(m, err, eta,
                                  err <= eta and max_abs <= 1.0 + _BOUND_SLACK)
        if last.passed:
            def value(x, _c=coeffs):
                return bk.clenshaw_scalar(_c, 0.5 * x)

            def p2(x, _c=coeffs):
                v = bk.clenshaw_scalar(_c, 0.5 * x)
                return _clip01(v * v)

            return PolySpec(
                family="erf", kind="semi-pellian", parity="odd", degree=d,
                params={"k": k, "eta": eta, "shrink": shrink,
                        "estimate_degree": d0},
                p2=p2, value=value,
                value_grid=lambda xs, _c=coeffs: bk.clenshaw_grid(_c, 0.5 * np.asarray(xs, dtype=np.float64)),
                certificate=last,
            )
        d = int(math.ceil(1.25 * d))
        if d % 2 == 0:
            d += 1
    raise ConstructionFailed(
        f"erf approximant (k={k}, eta={eta}) failed its certificate up to "
        f"degree {16 * d0} (last: {last})")


_erf_cache = {}


def cached_erf_poly(k, eta):
    """Construction cache keyed by the round parameters (k, eta)."""
    key = (k, eta)
    spec = _erf_cache.get(key)
    if spec is None:
        spec = build_erf_poly(k, eta)
        _erf_cache[key] = spec
    return spec


def kappa_of_tau(tau):
    """Tail cutoff: erf is within tau of +-1 beyond +-kappa(tau)."""
    if not 0.0 < tau < math.sqrt(2.0 / math.pi):
        raise DomainError(f"tau must be in (0, sqrt(2/pi)), got {tau}")
    return 0.5 * math.sqrt(2.0 * math.log(2.0 / (math.pi * tau * tau)))


def build_hybrid_poly(tau, eta, k, a_mid, enforce_midpoint=True, verify=True):
    """Even threshold polynomial crossing 1/2 at a_mid with slope ~0.11k.

    P(a) = f(a) + f(-a) with f(a) = (1 + P_erf(a - a_mid) + eta)/(4 eta + tau
    + 2).  Requires a_mid >= kappa(tau)/k for the two erf ramps not to
    interfere; `enforce_midpoint=False` skips that check (the estimator's
    early rounds legitimately operate slightly outside it).  The degree
    equals the certified erf degree.
    """
    kap = kappa_of_tau(tau)
    if not 0.0 < eta < 1.0:
        raise DomainError(f"eta must be in (0, 1), got {eta}")
    if k < 1.0:
        raise DomainError(f"k must be >= 1, got {k}")
    if enforce_midpoint and a_mid < kap / k:
        raise PreconditionViolated(
            f"a_mid = {a_mid} < kappa/k = {kap / k}; the shifted ramps interfere")
    erf_spec = cached_erf_poly(k, eta)
    denom = 4.0 * eta + tau + 2.0
    lam = (2.0 * eta + tau) / denom

    def value(a, _e=erf_spec.value, _m=a_mid, _eta=eta, _den=denom):
        return (2.0 + 2.0 * _eta + _e(a - _m) + _e(-a - _m)) / _den

    def p2(a):
        v = value(a)
        return _clip01(v * v)

    def value_grid(xs, _eg=erf_spec.value_grid, _m=a_mid, _eta=eta, _den=denom):
        x = np.asarray(xs, dtype=np.float64)
        return (2.0 + 2.0 * _eta + _eg(x - _m) + _eg(-x - _m)) / _den

    cert = None
    if verify:
        lo = max(a_mid - 1.0 / k, 0.0)
        hi = min(a_mid + 1.0 / k, 1.0)
        g1 = np.linspace(lo, a_mid, 200)
        g2 = np.linspace(a_mid, hi, 200)
        upper = 0.5 + 0.11 * k * (g1 - a_mid) + eta + 0.25 * tau
        lower = 0.5 + 0.11 * k * (g2 - a_mid) - eta - 0.25 * tau
        viol = max(float(np.max(value_grid(g1) - upper)),
                   float(np.max(lower - value_grid(g2))))
        full = np.linspace(-1.0, 1.0, max(10 * erf_spec.degree, 400))
        pv = value_grid(full)
        in_range = float(np.min(pv)) >= -1e-12 and float(np.max(pv)) <= 1.0 + 1e-12
        cert = SupNormCertificate(g1.size + g2.size, max(viol, 0.0), 0.0,
                                  viol <= 1e-12 and in_range)
    return PolySpec(
        family="hybrid", kind="semi-pellian", parity="even",
        degree=erf_spec.degree,
        params={"tau": tau, "eta": eta, "k": k, "a_mid": a_mid,
                "lambda": lam, "kappa": kap,
                "midpoint_ok": a_mid >= kap / k},
        p2=p2, value=value, value_grid=value_grid, certificate=cert,
    )
