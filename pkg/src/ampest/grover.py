"""Exact 2x2 model of the two-dimensional subspace spanned by the input state
and its projected component.

All dynamics of the estimators live in this subspace, spanned by the two
orthonormal bases {psi, psi_perp} and {pi, pi_perp}.  An amplitude a in [0,1]
fixes the geometry: psi = a*pi + abar*pi_perp with abar = sqrt(1-a^2).
"""

from enum import Enum
from math import asin, cos, sin, sqrt

import numpy as np

from ._backend import cheb_t
from .errors import DomainError


class GroverLabel(Enum):
    """The four tracked states.  Bit 0 is perp-ness, bit 1 is the basis."""

    PSI = 0
    PSI_PERP = 1
    PI = 2
    PI_PERP = 3

    @property
    def basis_is_pi(self):
        return bool(self.value & 2)


def validate_amplitude(a):
    if not 0.0 <= a <= 1.0:
        raise DomainError(f"amplitude must lie in [0, 1], got {a}")
    return float(a)


def abar(a):
    """sqrt(1 - a^2), the weight of the non-projected component."""
    validate_amplitude(a)
    return sqrt(max(0.0, (1.0 - a) * (1.0 + a)))


def theta(a):
    """The rotation angle asin(a) in [0, pi/2]."""
    validate_amplitude(a)
    return asin(a)


def decompose_psi(a):
    """Coefficients (a, abar) of psi in the {pi, pi_perp} basis.

    For a = 0 the convention pi_perp := psi applies (and symmetrically for
    a = 1), so the degenerate endpoints return (0, 1) and (1, 0) rather than
    erroring.
    """
    validate_amplitude(a)
    return float(a), abar(a)


def reflection(a):
    """R = [[a, abar], [abar, -a]], the basis-change reflection."""
    ab = abar(a)
    return np.array([[a, ab], [ab, -a]], dtype=complex)


def phase_rotation(phi):
    """diag(e^{i phi}, e^{-i phi})."""
    if not np.isfinite(phi):
        raise DomainError(f"phase must be finite, got {phi}")
    return np.array([[cos(phi) + 1j * sin(phi), 0.0],
                     [0.0, cos(phi) - 1j * sin(phi)]], dtype=complex)


def qsp_unitary(a, phases):
    """The product prod_j (R e^{i phi_j Z}) R for the given phase sequence.

    With all phases pi/2 this realizes the degree d = len(phases)+1 Chebyshev
    polynomial: |entry(0,0)| = |T_d(a)|.  Global phases are not normalized
    away; only magnitudes are contracted.
    """
    r = reflection(a)
    u = r.copy()
    for phi in phases:
        u = u @ phase_rotation(phi) @ r
    return u


def chebyshev_magnitude(a, d):
    """|T_d(a)| by closed form; oracle-free shortcut for the QSP product."""
    validate_amplitude(a)
    return abs(cheb_t(d, a))
