"""
Scattering wave functions near a bound-state pole.

With the square-root factor s(k) = [2 alpha (alpha^2 + k^2)]^(1/2) the
scattering solution approaches the bound state at the pole,

    s(k) v(k, r) -> -u_alpha(r)        as k -> i alpha,

for any finite-range potential. Away from the pole the ratio

    R(k, r) = -s(k) v(k, r) / u_alpha(r) = 1 + R1(r) x + R2(r) x^2 + ...,   x = alpha^2 + k^2,

measures the deviation. This module evaluates R, fits R1 and R2 from real-k
data, checks the pole limit by extrapolation in x, and locates the radius at
which scaled scattering and bound functions cross.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from . import analytic_solutions as exact
from ._parallel import parallel_map
from .errors import ConfigurationError, DomainError, FitError, NodeSingularityError
from .potentials import SeparableModel
from .radial_solver import (
    DEFAULT_STEP,
    BoundState,
    RadialGrid,
    ScatteringState,
    bound_state_count,
    find_bound_states,
    scattering_state,
)

DEFAULT_K_SAMPLES = (0.05, 0.1, 0.15, 0.2, 0.25, 0.3)
NODE_BAND = 1e-10
MAX_CONDITION = 1e8


class TruncationWarning(UserWarning):
    """A truncated small-r expansion was evaluated outside its useful range."""


# --------------------------------------------------------------------------
# State construction shared by local and separable models
# --------------------------------------------------------------------------

def solve_bound_state(model, grid: RadialGrid | None = None, level: int = -1,
                      h: float = DEFAULT_STEP) -> BoundState:
    """Bound state of ``model``; ``level`` indexes the list ordered deepest first."""
    if isinstance(model, SeparableModel):
        return exact.yamaguchi_bound_state(model, grid)
    states = find_bound_states(model, grid, h=h)
    if not states:
        raise DomainError(f"{model.kind} model has no bound state")
    return states[level]


def solve_scattering(model, k: float, grid: RadialGrid | None = None, n_bound: int | None = None) -> ScatteringState:
    if isinstance(model, SeparableModel):
        return exact.yamaguchi_scattering_state(model, k, grid)
    return scattering_state(model, k, grid, n_bound=n_bound)


def common_grid(model, alpha: float, k_samples, h: float = DEFAULT_STEP) -> RadialGrid:
    """One grid long enough for the bound tail and every k in ``k_samples``."""
    return RadialGrid.for_model(model, h, alpha=alpha, k=np.asarray(k_samples, dtype=float))


def _scattering_sweep(model, k_samples, grid) -> list[ScatteringState]:
    n_bound = None if isinstance(model, SeparableModel) else bound_state_count(model, grid.h)
    return parallel_map(lambda k: solve_scattering(model, float(k), grid, n_bound), list(k_samples))


def _sqrt_factor(alpha: float, k: float) -> float:
    return math.sqrt(2.0 * abs(alpha) * (alpha * alpha + k * k))


# --------------------------------------------------------------------------
# Pointwise quantities
# --------------------------------------------------------------------------

def bound_psi(b: BoundState, r):
    """psi_alpha(r) = u_alpha(r)/r with the r -> 0 limit."""
    return b.over_r(r)


def modified_scattering(s: ScatteringState, alpha_ref: float, r):
    """psi~(k, r) = -[2|alpha| (alpha^2 + k^2)]^(1/2) v(k, r)/r."""
    if alpha_ref == 0:
        raise DomainError("alpha_ref = 0 makes the square-root factor vanish identically")
    return -_sqrt_factor(alpha_ref, s.k) * s.over_r(r)


def ratio(b: BoundState, s: ScatteringState, r):
    """R(k, r) = -[2 alpha (alpha^2 + k^2)]^(1/2) v(k, r)/u_alpha(r).

    At r = 0 the ratio of origin slopes is used. Raises near nodes of u_alpha.
    """
    r = np.asarray(r, dtype=float)
    umax = np.max(np.abs(b.u))
    u = b.at(r)
    if np.any((r > 0) & (np.abs(u) < NODE_BAND * umax)):
        raise NodeSingularityError("ratio requested at a node of the bound-state function")
    out = np.asarray(-_sqrt_factor(b.alpha, s.k) * s.over_r(r) / b.over_r(r))
    return out if out.ndim else float(out)


# --------------------------------------------------------------------------
# Series coefficients
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RatioSeries:
    """Per-radius fit of R - 1 = R1 x + R2 x^2 + (higher powers).

    Powers above x^2 (``higher``, shape (order-2, n_r)) absorb the truncation
    of the series; they are kept so that `reconstruct` reproduces the data
    but are not physical outputs. ``residual`` is the largest misfit of
    `reconstruct` over the k samples at each radius and ``max_deviation``
    the largest |R - 1| there.
    """

    r: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    r1_err: np.ndarray
    r2_err: np.ndarray
    residual: np.ndarray
    max_deviation: np.ndarray
    k_samples: np.ndarray
    x: np.ndarray
    alpha: float
    measured: np.ndarray
    higher: np.ndarray

    def reconstruct(self, k: float) -> np.ndarray:
        x = self.alpha ** 2 + k * k
        out = 1.0 + self.r1 * x + self.r2 * x * x
        for p, c in enumerate(self.higher, start=3):
            out = out + c * x ** p
        return out


def _design(x: np.ndarray, order: int) -> np.ndarray:
    return np.column_stack([x ** p for p in range(1, order + 1)])


def _weighted_lstsq(x: np.ndarray, y: np.ndarray, order: int):
    """Fit y (shape n_k x n_r) against powers of x; weights 1/x equalise relative size of terms."""
    a = _design(x, order)
    w = 1.0 / x
    aw = a * w[:, None]
    cond = np.linalg.cond(aw)
    if cond > MAX_CONDITION:
        raise FitError(f"design matrix condition number {cond:.3g} > {MAX_CONDITION:g}; widen the x span")
    yw = y * w[:, None]
    coef, *_ = np.linalg.lstsq(aw, yw, rcond=None)
    resid = yw - aw @ coef
    dof = max(len(x) - order, 1)
    sigma2 = np.sum(resid ** 2, axis=0) / dof
    cov_unit = np.linalg.inv(aw.T @ aw)
    err = np.sqrt(np.outer(np.diag(cov_unit), sigma2))
    return coef, err


def _check_samples(alpha, k_samples):
    k = np.asarray(k_samples, dtype=float)
    if k.size < 4:
        raise FitError("need at least four k samples")
    x = alpha * alpha + k * k
    if x.max() < 4 * x.min():
        raise FitError(f"x = alpha^2 + k^2 spans only a factor {x.max() / x.min():.3g}; need >= 4")
    return k, x


def ratio_table(b: BoundState, states, r) -> np.ndarray:
    """R(k_j, r_i) as an array of shape (n_k, n_r)."""
    return np.array([np.atleast_1d(ratio(b, s, r)) for s in states])


def fit_ratio_series(model, b: BoundState, r, k_samples=DEFAULT_K_SAMPLES, *, order: int = 4,
                     states=None) -> RatioSeries:
    """Extract R1(r) and R2(r) by least squares in x = alpha^2 + k^2.

    ``order`` is the highest power of x in the fit; powers above two act as
    nuisance terms absorbing the truncation of the series and are not
    reported. Coefficient errors are the usual standard errors.
    """
    if order < 2:
        raise ConfigurationError("order must be at least 2")
    k, x = _check_samples(b.alpha, k_samples)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if states is None:
        states = _scattering_sweep(model, k, b.grid)
    y = ratio_table(b, states, r) - 1.0
    coef, err = _weighted_lstsq(x, y, order)
    misfit = np.max(np.abs(y - _design(x, order) @ coef), axis=0)
    return RatioSeries(r=r, r1=coef[0], r2=coef[1], r1_err=err[0], r2_err=err[1], residual=misfit,
                       max_deviation=np.max(np.abs(y), axis=0), k_samples=k, x=x, alpha=b.alpha,
                       measured=y + 1.0, higher=coef[2:])


def r1_reference(kind: str, params: dict, r):
    """Truncated small-r expansions of R1(r) for the soluble models.

    kind: ``"Yamaguchi"`` (beta, alpha), ``"Bargmann"`` (beta, alpha) or
    ``"SphericalWell"`` (U0, a, alpha). A `TruncationWarning` is issued when the
    last retained term is not small compared with the sum, a proxy for the
    size of the first omitted term.
    """
    r = np.asarray(r, dtype=float)
    if kind == "Yamaguchi":
        b, a = params["beta"], params["alpha"]
        terms = [3 / (8 * b * (b + a)) + 0 * r, r / (4 * b), -(b - a) * r ** 2 / (8 * b)]
    elif kind == "Bargmann":
        b, a = params["beta"], params["alpha"]
        terms = [1 / (2 * (b * b - a * a)) + 0 * r, -r ** 2 / 6, -(2 * b * b - 3 * a * a) * r ** 4 / 90]
    elif kind == "SphericalWell":
        u0, aa, a = params["U0"], params["a"], params["alpha"]
        terms = [aa * aa / (4 * (1 + a * aa)) - (4 + a * aa) / (4 * (u0 - a * a)) + 0 * r, -r ** 2 / 6]
    else:
        raise DomainError(f"no reference expansion for {kind!r}")
    total = sum(terms)
    last, prev = np.abs(terms[-1]), np.abs(terms[-2])
    with np.errstate(divide="ignore", invalid="ignore"):
        next_est = np.where(prev > 0, last * last / prev, 0.0)
    if np.any(next_est > 1e-2 * np.maximum(np.abs(total), 1e-300)):
        warnings.warn(f"{kind} R1 expansion used beyond its truncation range", TruncationWarning, stacklevel=2)
    return total if total.ndim else float(total)


def r1_root_estimate(kind: str, params: dict, quartic: bool = True) -> float:
    """Positive root of the truncated R1 expansion (Bargmann only)."""
    if kind != "Bargmann":
        raise DomainError("root estimate implemented for the Bargmann expansion")
    b, a = params["beta"], params["alpha"]
    c0 = 1 / (2 * (b * b - a * a))
    if not quartic:
        return math.sqrt(6 * c0)
    c4 = (2 * b * b - 3 * a * a) / 90
    s = (-1 / 6 + math.sqrt(1 / 36 + 4 * c4 * c0)) / (2 * c4)
    return math.sqrt(s)


# --------------------------------------------------------------------------
# Pole limit
# --------------------------------------------------------------------------

def theorem_limit_check(model, b: BoundState, probes=(0.2, 0.5, 1.0, 2.0),
                        k_samples=DEFAULT_K_SAMPLES, degree: int = 4, states=None) -> float:
    """Max relative deviation of the extrapolated s(k) v(k, r) from -u_alpha(r).

    s(k) v(k, r) is analytic in x = alpha^2 + k^2; it is fitted with a
    polynomial of ``degree`` in x over the real-k samples and evaluated at x = 0.
    """
    k, x = _check_samples(b.alpha, k_samples)
    if degree >= len(k):
        raise FitError("polynomial degree must be below the number of k samples")
    probes = np.asarray(probes, dtype=float)
    if states is None:
        states = _scattering_sweep(model, k, b.grid)
    scaled = np.array([_sqrt_factor(b.alpha, s.k) * np.atleast_1d(s.at(probes)) for s in states])
    u = np.atleast_1d(b.at(probes))
    xs = x / x.max()
    limits = np.array([np.polyval(np.polyfit(xs, scaled[:, i], degree), 0.0) for i in range(len(probes))])
    return float(np.max(np.abs(limits + u) / np.abs(u)))


# --------------------------------------------------------------------------
# Crossover radius
# --------------------------------------------------------------------------

def _node_radii(b: BoundState) -> np.ndarray:
    u = b.u[: b.match_index + 1]
    r = b.grid.r[: b.match_index + 1]
    idx = np.where(np.sign(u[1:-1]) * np.sign(u[2:]) < 0)[0] + 1
    return np.array([brentq(lambda t: float(b.at(t)), r[i], r[i + 1]) for i in idx])


def crossover_radius(model, b: BoundState, k: float, region: int = 0, s: ScatteringState | None = None,
                     xtol: float = 1e-6):
    """First radius where R(k, r) = 1 inside the ``region``-th inter-node interval of u_alpha.

    Returns None when R - 1 keeps one sign over the interval. Region 0 is
    (0, first node), or (0, range_cutoff + 3/alpha) for a nodeless state.
    """
    if s is None:
        s = solve_scattering(model, k, b.grid)
    nodes = _node_radii(b)
    edges = np.concatenate([[0.0], nodes, [b.model.range_cutoff + 3.0 / b.alpha if b.model is not None else nodes[-1] + 3.0 / b.alpha]])
    if region >= len(edges) - 1:
        raise ConfigurationError(f"u_alpha has only {len(edges) - 1} inter-node regions")
    lo, hi = edges[region], edges[region + 1]
    h = b.grid.h
    pad = 1e-3 * (hi - lo)
    rr = np.arange(lo + pad, hi - pad, h)
    if rr.size < 2:
        return None
    g = np.atleast_1d(ratio(b, s, rr)) - 1.0
    change = np.where(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]
    if change.size == 0:
        return None
    i = change[0]
    return float(brentq(lambda t: float(ratio(b, s, t)) - 1.0, rr[i], rr[i + 1], xtol=xtol))


def crossover_from_series(series: RatioSeries) -> float | None:
    """Root of the fitted R1(r), i.e. the k -> i alpha limit of the crossover radius."""
    g = series.r1
    change = np.where(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]
    if change.size == 0:
        return None
    spline = CubicSpline(series.r, g)
    i = change[0]
    return float(brentq(spline, series.r[i], series.r[i + 1], xtol=1e-10))


# --------------------------------------------------------------------------
# Outgoing-wave approximation
# --------------------------------------------------------------------------

def complex_outgoing_approx(b: BoundState, k: float, r):
    """psi(+)(k, r) ~ -(2 alpha)^(-1/2) psi_alpha(r) / (alpha + i k) near a bound-state pole."""
    if not b.alpha > 0:
        raise DomainError("the outgoing-wave approximation needs a true bound state (alpha > 0)")
    if not k > 0:
        raise DomainError("k must be positive")
    return -b.over_r(r) / (math.sqrt(2 * b.alpha) * (b.alpha + 1j * k))


# --------------------------------------------------------------------------
# Sign of the well R1(0)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class R1SignReport:
    """Measured R1(0) of a well state against the closed expansion and the ordering of the curves at the origin.

    ``ordering_sign`` is +1 for the lowest lightly bound state (scattering
    functions above the bound one at the origin) and -1 when it is an excited
    state; ``formula_value`` is the truncated expansion at r = 0.
    """

    depth: float
    radius: float
    alpha: float
    node_count: int
    measured: float
    measured_err: float
    formula_value: float
    ordering_sign: int

    @property
    def measured_sign(self) -> int:
        return 1 if self.measured > 0 else -1

    @property
    def matches_formula_sign(self) -> bool:
        return self.measured_sign == (1 if self.formula_value > 0 else -1)

    @property
    def matches_ordering_sign(self) -> bool:
        return self.measured_sign == self.ordering_sign

    @property
    def magnitude_ratio(self) -> float:
        return abs(self.measured) / abs(self.formula_value)

    def summary(self) -> str:
        src = []
        if self.matches_formula_sign:
            src.append("closed formula")
        if self.matches_ordering_sign:
            src.append("curve ordering")
        return (f"U0={self.depth:g} a={self.radius:g} alpha={self.alpha:.6f} nodes={self.node_count}: "
                f"fitted R1(0)={self.measured:+.6f} (+/-{self.measured_err:.1e}), formula {self.formula_value:+.6f}, "
                f"|fit/formula|={self.magnitude_ratio:.4f}; sign agrees with: {', '.join(src) or 'neither'}")


def well_r1_sign_report(depth: float, radius: float = 1.0, k_samples=DEFAULT_K_SAMPLES, level: int = -1,
                        h: float = DEFAULT_STEP) -> R1SignReport:
    from .potentials import make_spherical_well

    model = make_spherical_well(depth, radius)
    b0 = solve_bound_state(model, level=level, h=h)
    grid = common_grid(model, b0.alpha, k_samples, h)
    b = solve_bound_state(model, grid, level=level)
    series = fit_ratio_series(model, b, [0.0], k_samples)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        formula = r1_reference("SphericalWell", {"U0": depth, "a": radius, "alpha": b.alpha}, 0.0)
    return R1SignReport(depth, radius, b.alpha, b.node_count, float(series.r1[0]), float(series.r1_err[0]),
                        float(formula), 1 if b.node_count == 0 else -1)
