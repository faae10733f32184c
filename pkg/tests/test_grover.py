import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ampest.errors import DomainError
from ampest.grover import (GroverLabel, decompose_psi, phase_rotation,
                           qsp_unitary, reflection)

CHEB_PHASES = math.pi / 2


def chebyshev_closed_form(d, x):
    # coefficient recurrence T_{n+1} = 2x T_n - T_{n-1}, independent of acos
    t_prev, t = 1.0, x
    if d == 0:
        return t_prev
    for _ in range(d - 1):
        t_prev, t = t, 2.0 * x * t - t_prev
    return t


def test_decompose_endpoints():
    assert decompose_psi(0.0) == (0.0, 1.0)
    assert decompose_psi(1.0) == (1.0, 0.0)


def test_decompose_pythagorean():
    a, ab = decompose_psi(0.6)
    assert a == 0.6
    assert abs(ab - 0.8) < 1e-15
    assert abs(a * a + ab * ab - 1.0) < 1e-12


@pytest.mark.parametrize("bad", [-0.1, 1.1, 2.0])
def test_decompose_domain(bad):
    with pytest.raises(DomainError):
        decompose_psi(bad)


def test_phase_rotation_special_angles():
    np.testing.assert_allclose(phase_rotation(0.0), np.eye(2), atol=1e-15)
    np.testing.assert_allclose(phase_rotation(math.pi / 2),
                               np.diag([1j, -1j]), atol=1e-15)
    np.testing.assert_allclose(phase_rotation(math.pi),
                               -np.eye(2), atol=1e-15)


def test_qsp_empty_phases_is_reflection():
    u = qsp_unitary(0.6, [])
    np.testing.assert_allclose(u, reflection(0.6), atol=1e-15)
    assert abs(u[0, 0]) == pytest.approx(0.6, abs=1e-15)


def test_qsp_degree_three_at_half():
    # T_3(0.5) = 4(0.125) - 1.5 = -1, so the magnitude is exactly 1
    u = qsp_unitary(0.5, [CHEB_PHASES, CHEB_PHASES])
    assert abs(u[0, 0]) == pytest.approx(1.0, abs=1e-12)
    assert chebyshev_closed_form(3, 0.5) == pytest.approx(-1.0, abs=1e-12)


def test_qsp_degree_seven():
    # direct matrix-product oracle against the cosine closed form
    u = qsp_unitary(0.8, [CHEB_PHASES] * 6)
    expect = abs(math.cos(7 * math.acos(0.8)))
    assert expect == pytest.approx(0.2063872, abs=1e-7)
    assert abs(u[0, 0]) == pytest.approx(expect, abs=1e-10)


def test_chebyshev_phases_realize_t_d():
    grid = np.linspace(0.0, 1.0, 101)
    for d in range(1, 51):
        phases = [CHEB_PHASES] * (d - 1)
        for a in grid:
            u00 = abs(qsp_unitary(float(a), phases)[0, 0])
            assert abs(u00 - abs(chebyshev_closed_form(d, float(a)))) < 1e-10


def test_unitarity_random_products(rng):
    for _ in range(1000):
        a = float(rng.random())
        length = int(rng.integers(0, 65))
        phases = rng.uniform(-math.pi, math.pi, length)
        u = qsp_unitary(a, phases)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-10)


def test_row_normalization(rng):
    for _ in range(500):
        a = float(rng.random())
        phases = rng.uniform(-math.pi, math.pi, int(rng.integers(0, 65)))
        u = qsp_unitary(a, phases)
        assert abs(abs(u[0, 0]) ** 2 + abs(u[0, 1]) ** 2 - 1.0) < 1e-10


@given(a=st.floats(0.0, 1.0),
       phases=st.lists(st.floats(-math.pi, math.pi), max_size=16))
@settings(max_examples=60, deadline=None)
def test_qsp_unitary_property(a, phases):
    u = qsp_unitary(a, phases)
    assert np.max(np.abs(u @ u.conj().T - np.eye(2))) < 1e-10


def test_label_basis_bit():
    assert not GroverLabel.PSI.basis_is_pi
    assert not GroverLabel.PSI_PERP.basis_is_pi
    assert GroverLabel.PI.basis_is_pi
    assert GroverLabel.PI_PERP.basis_is_pi
