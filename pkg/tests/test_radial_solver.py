import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.optimize import brentq

from wavepole import analytic_solutions as exact
from wavepole.errors import ConfigurationError, DomainError, FitError, UnsupportedOperation
from wavepole.potentials import make_bargmann, make_spherical_well, make_tabulated, make_yamaguchi
from wavepole.radial_solver import (
    RadialGrid,
    asymptotic_normalization,
    bound_state_count,
    extract_phase_shift,
    find_bound_states,
    find_virtual_states,
    integrate_outward,
    orthogonality_defect,
    overlap,
    scattering_state,
    smatrix_imaginary_axis,
)


@pytest.fixture(scope="module")
def well28():
    model = make_spherical_well(2.8, 1.0)
    b0 = find_bound_states(model)[0]
    grid = RadialGrid.for_model(model, alpha=b0.alpha, k=0.05)
    return model, grid, find_bound_states(model, grid)[0]


def test_grid_snaps_to_cutoff():
    g = RadialGrid.for_model(make_bargmann(1.0, 0.1), 1e-3, r_max=20.0)
    rc = make_bargmann(1.0, 0.1).range_cutoff
    assert abs(round(rc / g.h) * g.h - rc) < 1e-12
    assert g.r[-1] == pytest.approx(g.r_max)
    with pytest.raises(ConfigurationError):
        RadialGrid(0.0, 1.0)
    with pytest.raises(ConfigurationError):
        RadialGrid(0.1, 0.05)


@pytest.mark.parametrize("depth,nodes", [(2.8, [0]), (22.547, [0, 1]), (60.0, [0, 1]), (75.0, [0, 1, 2])])
def test_well_levels_match_closed_form(depth, nodes):
    states = find_bound_states(make_spherical_well(depth, 1.0))
    roots = exact.well_alpha_roots(depth, 1.0)
    assert [s.node_count for s in states] == nodes
    assert np.allclose([s.alpha for s in states], roots, rtol=0, atol=1e-8)
    assert bound_state_count(make_spherical_well(depth, 1.0)) == len(nodes) == exact.well_bound_count(depth, 1.0)


def test_well_eigenvalue_values():
    # roots of kappa cot(kappa a) = -alpha computed independently (frozen)
    assert find_bound_states(make_spherical_well(2.8, 1.0))[0].alpha == pytest.approx(0.158695560939, abs=1e-10)
    assert find_bound_states(make_spherical_well(22.547, 1.0))[1].alpha == pytest.approx(0.158282771, abs=1e-8)


def test_virtual_state_of_shallow_2s_well():
    v = find_virtual_states(make_spherical_well(21.913, 1.0))
    roots = [r for r in exact.well_alpha_roots(21.913, 1.0, include_virtual=True) if r < 0]
    assert v[0] == pytest.approx(-0.158917, abs=1e-6)
    for x in v:
        assert min(abs(x - r) for r in roots) < 1e-8


@settings(max_examples=8, deadline=None)
@given(depth=st.floats(0.5, 40.0))
def test_random_well_depths_agree_with_closed_form(depth):
    roots = exact.well_alpha_roots(depth, 1.0)
    # levels within 1e-3 of threshold need a longer grid than the default window scan resolves
    if roots and min(roots) < 2e-3:
        return
    states = find_bound_states(make_spherical_well(depth, 1.0))
    assert len(states) == len(roots)
    assert np.allclose([s.alpha for s in states], roots, atol=1e-8)


def test_bound_state_shape_and_norm(well28):
    model, grid, b = well28
    r = np.linspace(0.0, 6.0, 61)
    ref = exact.well_bound_wavefunction(2.8, 1.0, b.alpha, r)
    assert np.max(np.abs(b.at(r) - ref)) < 1e-8
    inner = quad(lambda x: float(b.at(x)) ** 2, 0.0, 1.0, epsabs=1e-13)[0]
    assert inner + b.tail_norm(1.0) == pytest.approx(1.0, abs=1e-9)
    assert b.norm() == pytest.approx(1.0, abs=1e-9)
    assert b.n_as == pytest.approx(exact.well_bound_nas(2.8, 1.0, b.alpha), rel=1e-8)
    assert b.n_as > 0
    assert asymptotic_normalization(b) == pytest.approx(b.n_as, rel=1e-8)
    assert b.slope0 == pytest.approx(exact.well_bound_slope0(2.8, 1.0, b.alpha), rel=1e-7)
    assert b.over_r(0.0) == pytest.approx(b.slope0)


def test_bargmann_state_and_phase():
    beta, a = 1.0, 0.1
    model = make_bargmann(beta, a)
    (b,) = find_bound_states(model)
    assert b.alpha == pytest.approx(a, abs=1e-10)
    # residue of S = (k+ia)(k+ib)/((k-ia)(k-ib)) at k = ia gives N_as^2 = 2a(b+a)/(b-a)
    assert b.n_as == pytest.approx(math.sqrt(2 * a * (beta + a) / (beta - a)), rel=1e-8)
    for k in (0.05, 0.3, 1.0, 3.0):
        s = scattering_state(model, k)
        want = math.atan(a / k) + math.atan(beta / k) - math.pi
        assert s.delta == pytest.approx(want, abs=1e-8)


def test_scattering_matches_closed_form(well28):
    model, grid, _ = well28
    for k in (0.05, 0.1, 0.2, 0.5, 1.0, 4.0):
        s = scattering_state(model, k, grid if k < 4 else None)
        assert s.delta == pytest.approx(exact.well_phase_shift(2.8, 1.0, k), abs=1e-8)
        assert abs(abs(s.smatrix) - 1) < 1e-12
        r = np.linspace(0.0, 5.0, 51)
        v_ref, _ = exact.well_scattering_wavefunction(2.8, 1.0, k, r)
        assert np.max(np.abs(s.at(r) - v_ref)) < 1e-7 * max(1.0, np.max(np.abs(v_ref)))
        far = s.r[-50:]
        assert np.allclose(s.v[-50:], np.sin(k * far + s.delta) / k, rtol=1e-8, atol=1e-12)


def test_phase_branch_is_continuous_and_levinson_anchored():
    model = make_spherical_well(22.547, 1.0)
    ks = np.linspace(0.02, 6.0, 60)
    deltas = np.array([scattering_state(model, k).delta for k in ks])
    # near threshold delta ~ -k/alpha for the 2s pole at alpha = 0.158
    assert deltas[0] == pytest.approx(exact.well_phase_shift(22.547, 1.0, 0.02), abs=1e-8)
    assert -0.2 < deltas[0] < 0
    assert np.max(np.abs(np.diff(deltas))) < 1.0
    assert deltas[-1] < -1.0


def test_orthogonality(well28):
    model, grid, b = well28
    for k in (0.05, 0.2, 1.0):
        assert orthogonality_defect(b, scattering_state(model, k, grid)) < 1e-6


def test_overlap_of_two_levels():
    model = make_spherical_well(22.547, 1.0)
    s1, s2 = find_bound_states(model)
    assert abs(overlap(s1, s2)) < 1e-8
    assert overlap(s2, s2) == pytest.approx(1.0, abs=1e-8)


def test_h4_convergence():
    truth = exact.well_alpha_roots(2.8, 1.0)[0]
    model = make_spherical_well(2.8, 1.0)
    errs = [abs(find_bound_states(model, h=h)[0].alpha - truth) for h in (0.05, 0.025, 0.0125)]
    assert 12 < errs[0] / errs[1] < 20
    assert 12 < errs[1] / errs[2] < 20


def _step_well_alpha(u_in, u_out, r1, a):
    """Bound-state condition of a two-step well by matching log-derivatives."""

    def cond(alpha):
        k1 = math.sqrt(u_in + u_out - alpha ** 2)
        k2 = math.sqrt(u_out - alpha ** 2)
        # inside: sin(k1 r); middle: A sin(k2 r) + B cos(k2 r), matched at r1
        s, c = math.sin(k1 * r1), k1 * math.cos(k1 * r1)
        A = s * math.sin(k2 * r1) + c / k2 * math.cos(k2 * r1)
        B = s * math.cos(k2 * r1) - c / k2 * math.sin(k2 * r1)
        w = A * math.sin(k2 * a) + B * math.cos(k2 * a)
        dw = k2 * (A * math.cos(k2 * a) - B * math.sin(k2 * a))
        return dw + alpha * w

    return brentq(cond, 0.05, 1.5, xtol=1e-15)


def test_interior_jump_is_fourth_order():
    model = make_spherical_well(2.8, 1.0) + make_spherical_well(1.0, 0.5)
    truth = _step_well_alpha(1.0, 2.8, 0.5, 1.0)
    assert find_bound_states(model)[0].alpha == pytest.approx(truth, abs=1e-9)
    errs = [abs(find_bound_states(model, h=h)[0].alpha - truth) for h in (0.05, 0.025)]
    assert errs[0] / errs[1] > 10


def test_tabulated_well_reproduces_analytic_well():
    t = make_tabulated([0.0, 1.0], [-2.8, -2.8])
    assert find_bound_states(t)[0].alpha == pytest.approx(exact.well_alpha_roots(2.8, 1.0)[0], abs=1e-9)


def test_smatrix_grows_toward_pole():
    model = make_spherical_well(2.8, 1.0)
    alpha = exact.well_alpha_roots(2.8, 1.0)[0]
    vals = [abs(smatrix_imaginary_axis(model, alpha * (1 - d))) for d in (1e-1, 1e-2, 1e-3)]
    assert vals[0] < vals[1] < vals[2]
    with pytest.raises(DomainError):
        smatrix_imaginary_axis(model, 0.0)


def test_integrate_outward_is_regular():
    model = make_spherical_well(2.8, 1.0)
    grid = RadialGrid(0.01, 3.0)
    w = integrate_outward(model, 0.25, grid)
    assert w[0] == 0.0 and w[1] == pytest.approx(0.01)


def test_errors():
    model = make_spherical_well(2.8, 1.0)
    with pytest.raises(UnsupportedOperation):
        find_bound_states(make_yamaguchi(1.0, 0.2))
    with pytest.raises(DomainError):
        scattering_state(model, 0.0)
    with pytest.raises(ConfigurationError):
        scattering_state(model, 0.1, RadialGrid(1e-3, 5.0))
    r = np.linspace(0, 10, 1001)
    with pytest.raises(ConfigurationError):
        extract_phase_shift(r, np.sin(math.pi * r), math.pi, 2.0, 3.0)
    with pytest.raises(FitError):
        from wavepole.radial_solver import fit_exponential_tail

        fit_exponential_tail(r, -np.exp(-r), (1.0, 2.0))
    assert find_bound_states(make_spherical_well(0.5, 1.0)) == []
