import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wavepole import analytic_solutions as exact
from wavepole.errors import DomainError, NearPoleError
from wavepole.potentials import make_yamaguchi
from wavepole.radial_solver import RadialGrid


def _contour_residue(fn, pole, rho, n=64):
    t = 2 * np.pi * np.arange(n) / n
    ks = pole + rho * np.exp(1j * t)
    return complex(np.mean([fn(k) * (k - pole) for k in ks]))


@settings(max_examples=25, deadline=None)
@given(depth=st.floats(0.3, 80.0), radius=st.floats(0.5, 2.0))
def test_well_roots_satisfy_condition(depth, radius):
    for a in exact.well_alpha_roots(depth, radius, include_virtual=True):
        kappa = math.sqrt(depth - a * a)
        assert abs(kappa * math.cos(kappa * radius) + a * math.sin(kappa * radius)) < 1e-9 * max(1.0, kappa)
    assert len(exact.well_alpha_roots(depth, radius)) == exact.well_bound_count(depth, radius)


@pytest.mark.parametrize("depth", [2.8, 22.547])
def test_well_residue_is_minus_i_nas_squared(depth):
    for a in exact.well_alpha_roots(depth, 1.0):
        res = exact.well_smatrix_residue(depth, 1.0, a)
        want = -1j * exact.well_bound_nas(depth, 1.0, a) ** 2
        assert abs(res - want) < 1e-8 * abs(want)


def test_well_residue_frozen_value():
    # -i N_as^2 for U0 = 2.8, a = 1 (independent contour evaluation, frozen)
    a = exact.well_alpha_roots(2.8, 1.0)[0]
    assert exact.well_smatrix_residue(2.8, 1.0, a).imag == pytest.approx(-0.372857393, abs=1e-8)


def test_well_smatrix_properties():
    for k in (0.01, 0.3, 2.0, 7.0):
        s = exact.well_smatrix(2.8, 1.0, k)
        assert abs(abs(s) - 1) < 1e-13
        assert cmath.phase(s) == pytest.approx(math.remainder(2 * exact.well_phase_shift(2.8, 1.0, k), 2 * math.pi), abs=1e-10)
    a = exact.well_alpha_roots(2.8, 1.0)[0]
    with pytest.raises(NearPoleError):
        exact.well_smatrix(2.8, 1.0, 1j * a)


def test_well_wavefunction_continuity():
    a = exact.well_alpha_roots(2.8, 1.0)[0]
    eps = 1e-9
    lo, hi = exact.well_bound_wavefunction(2.8, 1.0, a, [1 - eps, 1 + eps])
    assert lo == pytest.approx(hi, abs=1e-8)
    v, d = exact.well_scattering_wavefunction(2.8, 1.0, 0.3, np.array([1 - eps, 1 + eps]))
    assert v[0] == pytest.approx(v[1], abs=1e-8)


def test_well_wrong_alpha_rejected():
    with pytest.raises(DomainError):
        exact.well_bound_nas(2.8, 1.0, 0.2)


def test_yamaguchi_bound_residual_and_norm():
    model = make_yamaguchi(1.0, 0.159)
    r = np.linspace(0.0, 20.0, 41)
    assert exact.yamaguchi_residual(model, r) < 1e-12
    from scipy.integrate import quad

    norm = quad(lambda x: exact.yamaguchi_bound(1.0, 0.159, x) ** 2, 0, np.inf)[0]
    assert norm == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("k", [0.05, 0.3, 1.0, 5.0])
def test_yamaguchi_scattering_residual(k):
    model = make_yamaguchi(1.0, 0.159)
    assert exact.yamaguchi_residual(model, np.linspace(0.0, 20.0, 41), k) < 1e-12


def test_yamaguchi_phase_branch_and_smatrix():
    ks = np.geomspace(1e-3, 30.0, 400)
    d = np.array([exact.yamaguchi_phase_shift(1.0, 0.159, k) for k in ks])
    assert abs(d[0]) < 0.01 and np.all(np.abs(np.diff(d)) < 0.2)
    assert d[-1] < -2.5
    for k in (0.1, 1.0):
        kc = exact.yamaguchi_kcot(1.0, 0.159, k)
        assert k / math.tan(exact.yamaguchi_phase_shift(1.0, 0.159, k)) == pytest.approx(kc, rel=1e-12)
        assert abs(abs(exact.yamaguchi_smatrix(1.0, 0.159, k)) - 1) < 1e-13


def test_yamaguchi_pole_and_residue():
    beta, a = 1.0, 0.159
    # the bound state sits where k cot(delta) = i k, i.e. at k = i alpha
    assert exact.yamaguchi_kcot(beta, a, 1j * a) == pytest.approx(-a, abs=1e-12)
    res = _contour_residue(lambda k: exact.yamaguchi_smatrix(beta, a, k), 1j * a, 1e-3 * a)
    c = exact.yamaguchi_bound_amplitude(beta, a)
    assert abs(res - (-1j * c * c)) < 1e-8 * c * c


def test_yamaguchi_states_on_grid():
    model = make_yamaguchi(1.0, 0.159)
    b = exact.yamaguchi_bound_state(model)
    s = exact.yamaguchi_scattering_state(model, 0.2)
    h = 1e-6
    assert b.slope0 == pytest.approx(b.at(h) / h, rel=1e-5)
    assert s.slope0 == pytest.approx(s.at(h) / h, rel=1e-5)
    far = np.array([60.0, 70.0])
    assert np.allclose(s.at(far), np.sin(0.2 * far + s.delta) / 0.2, atol=1e-12)


def test_exact_well_state_matches_numeric():
    from wavepole.radial_solver import find_bound_states
    from wavepole.potentials import make_spherical_well

    b = find_bound_states(make_spherical_well(2.8, 1.0))[0]
    e = exact.well_bound_state_exact(2.8, 1.0, exact.well_alpha_roots(2.8, 1.0)[0], b.grid)
    assert np.max(np.abs(e.u - b.u)) < 1e-8
    assert e.n_as == pytest.approx(b.n_as, rel=1e-8)
