import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wavepole.errors import DomainError, UnsupportedOperation
from wavepole.potentials import (
    CUTOFF_RELATIVE,
    evaluate_local,
    is_local,
    load_tabulated_csv,
    make_bargmann,
    make_gaussian,
    make_spherical_well,
    make_tabulated,
    make_yamaguchi,
    yamaguchi_strength,
)


def test_well_profile_and_edge():
    w = make_spherical_well(2.8, 1.0)
    assert w(0.5) == -2.8
    assert w(1.0) == 0.0  # truncated profile is zero from the cutoff on
    assert w.interior(1.0) == -2.8  # left limit used by the integrator
    assert w(3.0) == 0.0
    assert w.range_cutoff == 1.0
    assert w.breakpoints == (1.0,)


@pytest.mark.parametrize("depth,radius", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0)])
def test_well_rejects_bad_parameters(depth, radius):
    with pytest.raises(DomainError):
        make_spherical_well(depth, radius)


def test_negative_radius_rejected():
    with pytest.raises(DomainError):
        make_spherical_well(2.8, 1.0)(-0.1)


def test_bargmann_matches_hyperbolic_form():
    b, a = 1.0, 0.1
    p = make_bargmann(b, a)
    r = np.linspace(0.0, 8.0, 81)
    ref = -2 * (b * b - a * a) / (np.cosh(b * r) - (a / b) * np.sinh(b * r)) ** 2
    assert np.allclose(p(r), ref, rtol=1e-12, atol=0)


def test_bargmann_cutoff_and_asymptote():
    b, a = 1.0, 0.1
    p = make_bargmann(b, a)
    rc = p.range_cutoff
    assert abs(abs(p.interior(rc)) / abs(p.interior(0.0)) - CUTOFF_RELATIVE) < 1e-20
    assert 14.5 < rc < 14.7
    # large-r form: -8 (b^2 - a^2) exp(-2 b r) / (1 - a/b)^2
    r = 12.0
    asym = -8 * (b * b - a * a) * math.exp(-2 * b * r) / (1 - a / b) ** 2
    assert p(r) == pytest.approx(asym, rel=1e-9)


@pytest.mark.parametrize("beta,alpha", [(1.0, 1.0), (1.0, 1.5), (1.0, 0.0)])
def test_bargmann_domain(beta, alpha):
    with pytest.raises(DomainError):
        make_bargmann(beta, alpha)


def test_yamaguchi_strength_and_threshold():
    assert yamaguchi_strength(1.0, 0.159) == pytest.approx(2 * 1.159 ** 2)
    assert yamaguchi_strength(2.0, 0.0) == pytest.approx(2 * 2.0 ** 3)
    y = make_yamaguchi(1.0, 0.159)
    assert y.strength == pytest.approx(2 * 1.159 ** 2)
    assert y.kernel(0.0, 0.0) == pytest.approx(-y.strength)
    with pytest.raises(UnsupportedOperation):
        y(0.5)
    with pytest.raises(UnsupportedOperation):
        evaluate_local(y, 0.5)
    assert not is_local(y)
    with pytest.raises(DomainError):
        make_yamaguchi(0.1, 0.2)


def test_tabulated_interpolates_and_vanishes_outside():
    t = make_tabulated([0.0, 1.0, 2.0], [-2.0, -1.0, 0.0])
    assert t(0.5) == pytest.approx(-1.5)
    assert t(2.5) == 0.0
    assert t.breakpoints == ()
    assert make_tabulated([0.0, 1.0], [-1.0, -1.0]).breakpoints == (1.0,)


@pytest.mark.parametrize("r,u", [([0.0], [1.0]), ([0.0, 0.0], [1.0, 1.0]), ([0.0, 1.0], [1.0, np.nan]),
                                 ([-1.0, 1.0], [0.0, 0.0]), ([0.0, 1.0], [1.0])])
def test_tabulated_validation(r, u):
    with pytest.raises(DomainError):
        make_tabulated(r, u)


def test_tabulated_csv_with_header_and_comments(tmp_path):
    text = "# well sampled on a coarse grid\nr,U\n0,-2.8\n0.5,-2.8\n1.0,-2.8\n"
    t = load_tabulated_csv(io.StringIO(text))
    assert t.range_cutoff == 1.0 and t(0.7) == pytest.approx(-2.8)
    path = tmp_path / "u.csv"
    path.write_text("0,-1\n1,-1\n")
    assert load_tabulated_csv(path)(0.5) == -1.0
    with pytest.raises(DomainError):
        load_tabulated_csv(io.StringIO("0,1,2\n1,2,3\n"))


def test_combined_potential_is_weighted_sum():
    w = make_spherical_well(2.8, 1.0)
    g = make_gaussian(1.0, 0.5)
    c = w + g.scaled(0.01)
    r = np.array([0.0, 0.5, 0.99, 1.5, 2.0])
    assert np.allclose(c(r), w(r) + 0.01 * g(r))
    assert c.range_cutoff == g.range_cutoff
    assert c.breakpoints == (1.0,)
    assert w.scaled(0.0).breakpoints == ()


@settings(max_examples=30, deadline=None)
@given(eps=st.floats(-1.0, 1.0), r=st.floats(0.0, 0.999))
def test_scaled_well_is_linear(eps, r):
    w = make_spherical_well(1.0, 1.0)
    assert w.scaled(eps)(r) == pytest.approx(-eps)
