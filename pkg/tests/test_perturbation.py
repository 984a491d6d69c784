import cmath
import math

import numpy as np
import pytest

from wavepole import perturbation as pt
from wavepole.errors import DomainError, UnsupportedOperation
from wavepole.potentials import make_gaussian, make_spherical_well, make_yamaguchi
from wavepole.radial_solver import RadialGrid, find_bound_states, scattering_state


@pytest.fixture(scope="module")
def base():
    model = make_spherical_well(2.8, 1.0)
    b0 = find_bound_states(model)[0]
    grid = RadialGrid.for_model(model, alpha=b0.alpha, k=[0.05, 0.3])
    b = find_bound_states(model, grid)[0]
    return model, b, grid


def test_energy_shift_zero_and_linear(base):
    model, b, _ = base
    v1 = make_spherical_well(1.0, 1.0)
    assert pt.bound_energy_shift(b, v1.scaled(0.0)) == 0.0
    d1 = pt.bound_energy_shift(b, v1)
    assert pt.bound_energy_shift(b, v1.scaled(3.0)) == pytest.approx(3 * d1, rel=1e-13)
    # deeper well lowers the energy; U1 = -1 on r<1 gives -integral_0^1 u^2
    assert d1 < 0
    inner = 1.0 - b.tail_norm(1.0)
    assert d1 == pytest.approx(-inner, rel=1e-6)


def test_alpha_shift_closure():
    a0 = 0.159
    for d_e in (1e-2, 1e-3, 1e-4):
        a = pt.alpha_shift_first_order(a0, d_e)
        assert (-a * a) - (-a0 * a0 + d_e) == pytest.approx(-d_e ** 2 / (4 * a0 * a0), rel=1e-6)
    assert pt.alpha_shift_first_order(a0, -1e-3) > a0
    with pytest.raises(DomainError):
        pt.alpha_shift_first_order(0.0, 1e-3)


def test_scattering_length_smatrix():
    for alpha, k in [(0.159, 0.05), (-0.2, 0.3), (1.0, 2.0)]:
        assert abs(pt.scattering_length_smatrix(alpha, k)) == pytest.approx(1.0, abs=1e-15)
    assert pt.scattering_length_smatrix(0.159, 1e-9) == pytest.approx(1.0, abs=1e-7)
    assert cmath.phase(pt.scattering_length_smatrix(0.159, 0.159)) == pytest.approx(-math.pi / 2)
    with pytest.raises(DomainError):
        pt.scattering_length_smatrix(0.159, 0.0)


def test_delta_f_pole_form_close_to_full(base):
    model, b, grid = base
    v1 = make_spherical_well(1.0, 1.0)
    for k in (0.05, 0.1, 0.2, 0.3):
        s = scattering_state(model, k, grid, n_bound=1)
        full = pt.two_potential_delta_f(s, v1)
        pole = pt.delta_f_pole_approx(b, s, v1)
        assert abs(pole - full) / abs(full) < 0.01


def test_perturbed_phase_zero_shift(base):
    model, _, grid = base
    s = scattering_state(model, 0.1, grid, n_bound=1)
    assert pt.perturbed_phase(s, 0j) == s.delta


@pytest.mark.parametrize("v1", [make_spherical_well(1.0, 1.0), make_gaussian(1.0, 0.5)],
                         ids=["step", "gaussian"])
def test_second_order_error_scaling(v1):
    rep = pt.consistency_report(make_spherical_well(2.8, 1.0), v1, [0.0, 0.04, 0.02, 0.01],
                                [0.05, 0.1, 0.2, 0.3])
    zero = rep.rows[0]
    assert zero.energy_error == 0 and zero.alpha_error == 0 and zero.phase_error == 0
    for name, vals in rep.ratios.items():
        assert all(2.0 <= x <= 6.0 for x in vals), (name, vals)
    assert len(rep.table()) == 4


def test_requirements_on_models():
    v1 = make_spherical_well(1.0, 1.0)
    with pytest.raises(DomainError):
        pt.consistency_report(make_spherical_well(22.547, 1.0), v1, [0.01], [0.1])
    with pytest.raises(UnsupportedOperation):
        pt.consistency_report(make_yamaguchi(1.0, 0.159), v1, [0.01], [0.1])
    model = make_spherical_well(2.8, 1.0)
    b = find_bound_states(model)[0]
    with pytest.raises(UnsupportedOperation):
        pt.bound_energy_shift(b, make_yamaguchi(1.0, 0.159))
