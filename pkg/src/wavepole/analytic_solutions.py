"""
Closed-form solutions for the spherical well and the Yamaguchi kernel.

These serve two purposes: they are independent oracles for the Numerov
solver, and they are the only way the non-local Yamaguchi model is solved.

Spherical well (depth U0, radius a)
    inside:  u ~ sin(kappa r),  kappa^2 = U0 - alpha^2  (bound)
             v ~ sin(K r),      K^2     = U0 + k^2      (scattering)
    bound-state condition: kappa cot(kappa a) = -alpha

Yamaguchi kernel (reduced radial form, see `SeparableModel`)
    bound:       u(r) = c (exp(-alpha r) - exp(-beta r))
    scattering:  v(r) = [sin(k r + delta) - sin(delta) exp(-beta r)] / k
                 k cot(delta) = (beta^2 + k^2)^2 / lam - beta + (beta^2 + k^2) / (2 beta)
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import DomainError, NearPoleError
from .potentials import SeparableModel, make_yamaguchi, yamaguchi_strength
from .radial_solver import BoundState, RadialGrid, ScatteringState


# --------------------------------------------------------------------------
# Spherical well
# --------------------------------------------------------------------------

def _well_condition(alpha, depth, radius):
    # kappa cos(kappa a) + alpha sin(kappa a): zero exactly at the roots, no poles
    kappa = np.sqrt(depth - alpha * alpha)
    return kappa * np.cos(kappa * radius) + alpha * np.sin(kappa * radius)


def _scan_roots(fun, lo, hi, n):
    xs = np.linspace(lo, hi, n)
    vals = fun(xs)
    roots = []
    for i in range(n - 1):
        if vals[i] == 0.0:
            roots.append(float(xs[i]))
        elif vals[i] * vals[i + 1] < 0:
            roots.append(brentq(fun, xs[i], xs[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))
    return roots


def well_alpha_roots(depth: float, radius: float, include_virtual: bool = False) -> list[float]:
    """Roots of sqrt(U0 - alpha^2) cot(a sqrt(U0 - alpha^2)) = -alpha, largest first.

    Bound roots lie in (0, sqrt(U0)); with ``include_virtual`` the roots in
    (-sqrt(U0), 0) are appended (poles on the negative imaginary k axis).
    """
    if not depth > 0:
        raise DomainError("well depth must be positive")
    top = math.sqrt(depth)
    n = 4000 + int(200 * top * radius)
    fun = lambda x: _well_condition(x, depth, radius)
    eps = 1e-12 * top
    roots = _scan_roots(fun, eps, top - eps, n)
    if include_virtual:
        roots += _scan_roots(fun, -top + eps, -eps, n)
    return sorted(roots, reverse=True)


def _check_well_root(depth, radius, alpha):
    kappa = math.sqrt(depth - alpha * alpha)
    resid = _well_condition(alpha, depth, radius)
    if abs(resid) > 1e-8 * max(1.0, kappa):
        raise DomainError(f"alpha={alpha} does not satisfy the well bound-state condition (residual {resid:.3g})")
    return kappa


def well_bound_nas(depth: float, radius: float, alpha: float) -> float:
    """Asymptotic constant of the normalised well bound state (positive by convention)."""
    kappa = _check_well_root(depth, radius, alpha)
    edge = math.sin(kappa * radius)
    inner = radius / 2 - math.sin(2 * kappa * radius) / (4 * kappa)
    outer = edge ** 2 / (2 * alpha)
    amp = 1.0 / math.sqrt(inner + outer)
    return abs(amp * edge) * math.exp(alpha * radius)


def well_bound_wavefunction(depth: float, radius: float, alpha: float, r):
    """Normalised u_alpha(r) with a positive tail N_as exp(-alpha r)."""
    kappa = _check_well_root(depth, radius, alpha)
    r = np.asarray(r, dtype=float)
    edge = math.sin(kappa * radius)
    inner = radius / 2 - math.sin(2 * kappa * radius) / (4 * kappa)
    amp = math.copysign(1.0 / math.sqrt(inner + edge ** 2 / (2 * alpha)), edge)
    out = np.where(r < radius, amp * np.sin(kappa * r), amp * edge * np.exp(-alpha * (r - radius)))
    return out if out.ndim else float(out)


def well_bound_slope0(depth: float, radius: float, alpha: float) -> float:
    kappa = _check_well_root(depth, radius, alpha)
    edge = math.sin(kappa * radius)
    inner = radius / 2 - math.sin(2 * kappa * radius) / (4 * kappa)
    return math.copysign(1.0 / math.sqrt(inner + edge ** 2 / (2 * alpha)), edge) * kappa


def well_bound_count(depth: float, radius: float) -> int:
    """Number of bound states, floor(sqrt(U0) a / pi + 1/2)."""
    return int(math.floor(math.sqrt(depth) * radius / math.pi + 0.5))


def well_phase_shift(depth: float, radius: float, k: float) -> float:
    """Phase shift on the branch continuous in k with delta(0) = 0."""
    if not k > 0:
        raise DomainError("k must be positive")
    K = math.sqrt(depth + k * k)
    m = math.floor(K * radius / math.pi)
    sgn = -1.0 if m % 2 else 1.0
    theta = m * math.pi + math.atan2(sgn * k * math.sin(K * radius), sgn * K * math.cos(K * radius))
    return theta - k * radius - well_bound_count(depth, radius) * math.pi


def well_scattering_wavefunction(depth: float, radius: float, k: float, r):
    """(v(k, r), delta) with v -> sin(k r + delta)/k outside the well."""
    delta = well_phase_shift(depth, radius, k)
    K = math.sqrt(depth + k * k)
    amp = math.sin(k * radius + delta) / (k * math.sin(K * radius))
    r = np.asarray(r, dtype=float)
    out = np.where(r < radius, amp * np.sin(K * r), np.sin(k * r + delta) / k)
    return (out if out.ndim else float(out)), delta


def well_scattering_slope0(depth: float, radius: float, k: float) -> float:
    delta = well_phase_shift(depth, radius, k)
    K = math.sqrt(depth + k * k)
    return math.sin(k * radius + delta) / (k * math.sin(K * radius)) * K


def _kcot(depth, radius, k):
    K = np.sqrt(depth + k * k + 0j)
    if abs(K) < 1e-8:
        return 1.0 / radius + 0j
    return K / np.tan(K * radius)


def well_smatrix(depth: float, radius: float, k: complex) -> complex:
    """S(k) = exp(-2ika) (K cot Ka + ik)/(K cot Ka - ik), K^2 = U0 + k^2, for complex k."""
    k = complex(k)
    kc = _kcot(depth, radius, k)
    den = kc - 1j * k
    if abs(den) < 1e-8 * max(1.0, abs(kc)):
        raise NearPoleError(f"k={k} is within 1e-8 of an S-matrix pole")
    return complex(np.exp(-2j * k * radius) * (kc + 1j * k) / den)


def well_smatrix_residue(depth: float, radius: float, alpha: float, radius_fraction: float = 1e-3,
                         n_points: int = 64) -> complex:
    """Residue of S at k = i alpha from a trapezoidal contour integral on a small circle."""
    rho = radius_fraction * abs(alpha)
    t = 2 * np.pi * np.arange(n_points) / n_points
    ks = 1j * alpha + rho * np.exp(1j * t)
    vals = np.array([well_smatrix(depth, radius, kk) for kk in ks])
    return complex(np.mean(vals * (ks - 1j * alpha)))


# --------------------------------------------------------------------------
# Yamaguchi kernel
# --------------------------------------------------------------------------

def _yamaguchi_params(beta, alpha_b):
    if not (beta > alpha_b > 0):
        raise DomainError(f"need beta > alpha_b > 0, got {beta}, {alpha_b}")
    return yamaguchi_strength(beta, alpha_b)


def yamaguchi_bound_amplitude(beta: float, alpha_b: float) -> float:
    """c in u = c (e^{-alpha r} - e^{-beta r}); also the asymptotic constant N_as."""
    _yamaguchi_params(beta, alpha_b)
    return math.sqrt(2 * alpha_b * beta * (alpha_b + beta)) / (beta - alpha_b)


def yamaguchi_bound(beta: float, alpha_b: float, r):
    """Normalised bound state of the Yamaguchi kernel."""
    c = yamaguchi_bound_amplitude(beta, alpha_b)
    r = np.asarray(r, dtype=float)
    out = c * (np.exp(-alpha_b * r) - np.exp(-beta * r))
    return out if out.ndim else float(out)


def yamaguchi_kcot(beta: float, alpha_b: float, k):
    """k cot(delta) as a polynomial in k^2 (valid for complex k)."""
    lam = _yamaguchi_params(beta, alpha_b)
    d = beta * beta + k * k
    return d * d / lam - beta + d / (2 * beta)


def yamaguchi_phase_shift(beta: float, alpha_b: float, k: float) -> float:
    """Continuous-branch phase shift, delta(0) = 0 and delta(inf) = -pi."""
    if not k > 0:
        raise DomainError("k must be positive")
    lam = _yamaguchi_params(beta, alpha_b)
    d = beta * beta + k * k
    den = d * d - lam * beta + lam * d / (2 * beta)
    return math.atan2(-lam * k, -den)


def yamaguchi_smatrix(beta: float, alpha_b: float, k: complex) -> complex:
    k = complex(k)
    kc = yamaguchi_kcot(beta, alpha_b, k)
    den = kc - 1j * k
    if abs(den) < 1e-8 * max(1.0, abs(kc)):
        raise NearPoleError(f"k={k} is within 1e-8 of an S-matrix pole")
    return complex((kc + 1j * k) / den)


def yamaguchi_scattering(beta: float, alpha_b: float, k: float, r):
    """(v(k, r), delta) in the sin(k r + delta)/k normalisation."""
    delta = yamaguchi_phase_shift(beta, alpha_b, k)
    r = np.asarray(r, dtype=float)
    out = (np.sin(k * r + delta) - math.sin(delta) * np.exp(-beta * r)) / k
    return (out if out.ndim else float(out)), delta


def yamaguchi_residual(model: SeparableModel, r, k: float | None = None) -> float:
    """Max residual of a closed form substituted into the integro-differential equation.

    Bound state when ``k`` is None, scattering state otherwise. The overlap
    with the form factor is computed by adaptive quadrature, independently of
    the algebra that fixed the strength; the residual is relative to max|u''|.
    """
    beta, a = model.beta, model.alpha_b
    r = np.asarray(r, dtype=float)
    if k is None:
        c = yamaguchi_bound_amplitude(beta, a)
        fn = lambda s: c * (math.exp(-a * s) - math.exp(-beta * s))
        d2 = c * (a * a * np.exp(-a * r) - beta * beta * np.exp(-beta * r))
        energy = -a * a
    else:
        delta = yamaguchi_phase_shift(beta, a, k)
        fn = lambda s: (math.sin(k * s + delta) - math.sin(delta) * math.exp(-beta * s)) / k
        d2 = (-k * k * np.sin(k * r + delta) - beta * beta * math.sin(delta) * np.exp(-beta * r)) / k
        energy = k * k
    values = np.array([fn(x) for x in r.ravel()]).reshape(r.shape)
    overlap = quad(lambda s: math.exp(-beta * s) * fn(s), 0.0, 60.0 / beta,
                   epsabs=1e-15, epsrel=1e-13, limit=400)[0]
    lhs = d2 + energy * values
    rhs = -model.strength * np.exp(-beta * r) * overlap
    return float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(d2)))


def yamaguchi_bound_state(model: SeparableModel, grid: RadialGrid | None = None) -> BoundState:
    """Bound state of the Yamaguchi kernel packaged like a numeric one."""
    beta, a = model.beta, model.alpha_b
    if grid is None:
        grid = RadialGrid.for_model(model, alpha=a)
    c = yamaguchi_bound_amplitude(beta, a)
    exact = lambda r: yamaguchi_bound(beta, a, r)
    return BoundState(alpha=a, u=exact(grid.r), n_as=c, node_count=0, grid=grid,
                      match_index=min(grid.index_of(model.range_cutoff), grid.n_points - 1),
                      model=model, exact=exact, exact_slope0=c * (beta - a))


def yamaguchi_scattering_state(model: SeparableModel, k: float, grid: RadialGrid | None = None) -> ScatteringState:
    beta, a = model.beta, model.alpha_b
    if grid is None:
        grid = RadialGrid.for_model(model, k=k)
    delta = yamaguchi_phase_shift(beta, a, k)
    exact = lambda r: yamaguchi_scattering(beta, a, k, r)[0]
    winding = int(round((delta - math.atan(math.tan(delta))) / math.pi))
    slope = (k * math.cos(delta) + beta * math.sin(delta)) / k
    return ScatteringState(k=float(k), delta=delta, winding=winding, v=exact(grid.r), grid=grid,
                           match_index=min(grid.index_of(model.range_cutoff), grid.n_points - 1),
                           model=model, exact=exact, exact_slope0=slope)


def well_bound_state_exact(depth, radius, alpha, grid: RadialGrid) -> BoundState:
    """Closed-form well bound state on a grid (used as an oracle)."""
    exact = lambda r: well_bound_wavefunction(depth, radius, alpha, r)
    return BoundState(alpha=alpha, u=exact(grid.r), n_as=well_bound_nas(depth, radius, alpha),
                      node_count=int(math.floor(math.sqrt(depth - alpha * alpha) * radius / math.pi)),
                      grid=grid, match_index=grid.index_of(radius), exact=exact,
                      exact_slope0=well_bound_slope0(depth, radius, alpha))
