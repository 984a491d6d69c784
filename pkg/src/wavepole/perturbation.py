"""
First-order effect of a small added potential U1 on a weakly bound system.

Reduced units (hbar^2/2m = 1) throughout:

    Delta E   = integral u_alpha^2 U1 dr
    Delta f   = -exp(2 i delta0) integral v^2 U1 dr,      v -> sin(k r + delta0)/k
    alpha     = alpha0 (1 - Delta E / (2 alpha0^2))

The last line is fixed by requiring -alpha^2 = -alpha0^2 + Delta E at first
order. Near the pole v^2 ~ u_alpha^2 / (2 alpha (alpha^2 + k^2)), which turns
Delta f into -exp(2 i delta0) Delta E / (2 alpha (alpha^2 + k^2)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from ._parallel import parallel_map
from .errors import DomainError, UnsupportedOperation
from .potentials import LocalPotential, SeparableModel
from .radial_solver import (
    DEFAULT_STEP,
    BoundState,
    RadialGrid,
    ScatteringState,
    bound_state_count,
    find_bound_states,
    scattering_state,
)


def _require_local_perturbation(v1):
    if isinstance(v1, SeparableModel) or not isinstance(v1, LocalPotential):
        raise UnsupportedOperation("the perturbing potential must be local")


def _weighted_integral(state, samples: np.ndarray, v1: LocalPotential) -> float:
    """integral_0^rc1 samples^2 U1 dr for a state sampled on its grid.

    Simpson on the grid up to the last node inside U1's range, then a
    Gauss-Legendre piece for any leftover sliver.
    """
    grid = state.grid
    rc = v1.range_cutoff
    h = grid.h
    m = min(int(math.floor(rc / h + 1e-9)), grid.n_points - 1)
    r = grid.r[: m + 1]
    total = 0.0
    if m >= 2:
        total = float(simpson(samples[: m + 1] ** 2 * v1.interior(r), x=r))
    elif m == 1:
        total = 0.5 * h * (samples[1] ** 2 * v1.interior(h))
    lo = m * h
    if rc > lo * (1 + 1e-12):
        x, w = np.polynomial.legendre.leggauss(16)
        rr = lo + 0.5 * (rc - lo) * (x + 1.0)
        total += 0.5 * (rc - lo) * float(np.sum(w * np.asarray(state.at(rr)) ** 2 * v1.interior(rr)))
    return total


def bound_energy_shift(b: BoundState, v1) -> float:
    """First-order shift Delta E = integral u_alpha^2 U1 dr (negative for an attractive U1)."""
    _require_local_perturbation(v1)
    return _weighted_integral(b, b.u, v1)


def two_potential_delta_f(s0: ScatteringState, v1) -> complex:
    """Delta f = -exp(2 i delta0) integral v(k, r)^2 U1 dr from the unperturbed solution ``s0``."""
    _require_local_perturbation(v1)
    return -cmath.exp(2j * s0.delta) * _weighted_integral(s0, s0.v, v1)


def delta_f_pole_approx(b: BoundState, s0: ScatteringState, v1) -> complex:
    """Delta f with v^2 replaced by its pole form u_alpha^2 / (2 alpha (alpha^2 + k^2))."""
    d_e = bound_energy_shift(b, v1)
    return -cmath.exp(2j * s0.delta) * d_e / (2 * b.alpha * (b.alpha ** 2 + s0.k ** 2))


def alpha_shift_first_order(alpha0: float, delta_e: float) -> float:
    """alpha = alpha0 (1 - Delta E / (2 alpha0^2)); closes -alpha^2 = -alpha0^2 + Delta E at first order."""
    if not alpha0 > 0:
        raise DomainError("alpha0 must be positive")
    return alpha0 * (1.0 - delta_e / (2.0 * alpha0 * alpha0))


def scattering_length_smatrix(alpha: float, k: float) -> complex:
    """exp(2 i delta) = (alpha - i k)/(alpha + i k)."""
    if not k > 0:
        raise DomainError("k must be positive")
    return (alpha - 1j * k) / (alpha + 1j * k)


def perturbed_phase(s0: ScatteringState, delta_f: complex) -> float:
    """delta from 1 + 2 i k (f0 + Delta f) = exp(2 i delta), on the branch of delta0."""
    # 1 + 2ik f0 = exp(2 i delta0), so only the ratio to it matters
    w = 1.0 + 2j * s0.k * delta_f * cmath.exp(-2j * s0.delta)
    return s0.delta + 0.5 * cmath.phase(w)


@dataclass(frozen=True)
class ConsistencyRow:
    eps: float
    delta_e_pert: float
    delta_e_exact: float
    alpha_pert: float
    alpha_exact: float
    phase_errors: np.ndarray = field(repr=False)

    @property
    def energy_error(self) -> float:
        return abs(self.delta_e_pert - self.delta_e_exact)

    @property
    def alpha_error(self) -> float:
        return abs(self.alpha_pert - self.alpha_exact)

    @property
    def phase_error(self) -> float:
        return float(np.max(self.phase_errors))


@dataclass(frozen=True)
class ConsistencyReport:
    """Perturbative versus exact results for U0 + eps*U1 over a list of eps.

    ``ratios`` maps each error name to err(eps_i)/err(eps_{i+1}) for
    successive nonzero eps, which is 4 for halving eps under second-order
    scaling; ``constants`` holds err/eps^2 for the smallest nonzero eps.
    """

    alpha0: float
    k: np.ndarray
    rows: tuple
    ratios: dict
    constants: dict

    def table(self):
        """Rows of plain numbers suitable for CSV output."""
        return [(r.eps, r.delta_e_pert, r.delta_e_exact, r.energy_error, r.alpha_pert, r.alpha_exact,
                 r.alpha_error, r.phase_error) for r in self.rows]


_ERRORS = ("energy_error", "phase_error", "alpha_error")


def consistency_report(model0, v1, eps_list, k_list, h: float = DEFAULT_STEP) -> ConsistencyReport:
    """Compare first-order predictions with exact re-solves of ``model0 + eps * v1``.

    Requires exactly one bound state in ``model0``.
    """
    _require_local_perturbation(v1)
    if not isinstance(model0, LocalPotential):
        raise UnsupportedOperation("the unperturbed model must be local")
    if bound_state_count(model0, h) != 1:
        raise DomainError("the first-order formulas assume exactly one weakly bound state in the unperturbed model")
    k_arr = np.asarray(k_list, dtype=float)
    b0 = find_bound_states(model0, h=h)[0]
    grid0 = RadialGrid.for_model(model0, h, alpha=b0.alpha, k=k_arr)
    b0 = find_bound_states(model0, grid0)[0]
    s0 = [scattering_state(model0, float(k), grid0, n_bound=1) for k in k_arr]
    base_shift = bound_energy_shift(b0, v1)
    base_f = [two_potential_delta_f(s, v1) for s in s0]

    def one(eps):
        eps = float(eps)
        d_e_pert = eps * base_shift
        a_pert = alpha_shift_first_order(b0.alpha, d_e_pert)
        if eps == 0.0:
            return ConsistencyRow(eps, 0.0, 0.0, b0.alpha, b0.alpha, np.zeros(len(k_arr)))
        model = model0 + v1.scaled(eps)
        states = find_bound_states(model, h=h)
        if len(states) != 1:
            raise DomainError(f"eps={eps} changes the number of bound states to {len(states)}")
        b = states[0]
        grid = RadialGrid.for_model(model, h, alpha=b.alpha, k=k_arr)
        exact_delta = np.array([scattering_state(model, float(k), grid, n_bound=1).delta for k in k_arr])
        pert_delta = np.array([perturbed_phase(s, eps * f) for s, f in zip(s0, base_f)])
        return ConsistencyRow(eps, d_e_pert, b0.alpha ** 2 - b.alpha ** 2, a_pert, b.alpha,
                              np.abs(pert_delta - exact_delta))

    rows = tuple(parallel_map(one, list(eps_list)))
    nonzero = [r for r in rows if r.eps != 0.0]
    ratios = {name: [getattr(a, name) / getattr(b, name) for a, b in zip(nonzero, nonzero[1:])]
              for name in _ERRORS}
    constants = {}
    if nonzero:
        small = min(nonzero, key=lambda r: abs(r.eps))
        constants = {name: getattr(small, name) / small.eps ** 2 for name in _ERRORS}
    return ConsistencyReport(b0.alpha, k_arr, rows, ratios, constants)
