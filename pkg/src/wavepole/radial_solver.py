"""
S-wave radial Schrodinger solver on a uniform grid.

Solves

    w''(r) = (U(r) - E) w(r),      w(0) = 0,

with E = k^2 for scattering and E = -alpha^2 for bound (or virtual) states.
The interior [0, range_cutoff] is integrated with the Numerov recurrence
(global error O(h^4)); beyond the cutoff U is exactly zero, so the solution
there is the free one, matched in value and derivative at the cutoff.

Conventions
-----------
* Bound states are normalised to unit norm with a positive asymptotic
  constant, u(r) = N_as exp(-alpha r) outside the potential.
* Scattering states behave as sin(k r + delta)/k outside the potential.
  The phase shift follows the branch that is continuous in k and vanishes
  as k -> 0 (Levinson's count of bound states is subtracted).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import ConfigurationError, DomainError, FitError, NumericalFailure, UnsupportedOperation
from .potentials import LocalPotential, SeparableModel

DEFAULT_STEP = 1e-3
SCAN_POINTS = 200
MAX_ITERATIONS = 200
ALPHA_XTOL = 1e-13


@dataclass(frozen=True)
class RadialGrid:
    """Uniform mesh r_i = i*h, i = 0..n_points-1; ``r_max`` is snapped to the mesh."""

    h: float
    r_max: float

    def __post_init__(self):
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ConfigurationError(f"grid step must be positive, got {self.h}")
        if not self.r_max > self.h:
            raise ConfigurationError(f"r_max={self.r_max} must exceed the step {self.h}")
        n = int(round(self.r_max / self.h))
        object.__setattr__(self, "r_max", n * self.h)

    @property
    def n_points(self) -> int:
        return int(round(self.r_max / self.h)) + 1

    @cached_property
    def r(self) -> np.ndarray:
        return self.h * np.arange(self.n_points)

    def index_of(self, r: float) -> int:
        return int(round(r / self.h))

    @classmethod
    def for_model(cls, model, h: float = DEFAULT_STEP, r_max: Optional[float] = None, *,
                  alpha: Optional[float] = None, k=None) -> "RadialGrid":
        """Grid whose step divides the model's first discontinuity (else its range cutoff) exactly.

        Without an explicit ``r_max`` the extent is
        ``range_cutoff + max(20/|alpha|, 4*pi/min(k))`` (at least 10 beyond the cutoff).
        """
        rc = float(model.range_cutoff)
        anchor = min(getattr(model, "breakpoints", ()) or (rc,))
        if anchor > 0:
            n_c = max(2, math.ceil(anchor / h - 1e-9))
            h = anchor / n_c
        if r_max is None:
            extra = 10.0
            if alpha:
                extra = max(extra, 20.0 / abs(alpha))
            if k is not None:
                kmin = float(np.min(np.atleast_1d(k)))
                extra = max(extra, 4.0 * math.pi / kmin)
            r_max = rc + extra
        n = math.ceil(r_max / h - 1e-9)
        return cls(h, n * h)


# --------------------------------------------------------------------------
# Numerov core
# --------------------------------------------------------------------------

def _numerov_1d(f: np.ndarray, h: float, n: int, w0: float = 0.0, w1: Optional[float] = None) -> np.ndarray:
    """Solution of w'' = f w on nodes 0..n-1 from the two starting values.

    The defaults w0 = 0, w1 = h give the regular solution. Summed form of the
    Numerov recurrence: with z = (1 - h^2 f/12) w the first difference of z is
    accumulated, which keeps round-off growth linear in the number of steps.
    """
    h2 = h * h
    g = (1.0 - h2 * f / 12.0).tolist()
    hf = (h2 * f).tolist()
    w = [0.0] * n
    w[0] = w0
    w[1] = h if w1 is None else w1
    z = g[1] * w[1]
    d = z - g[0] * w[0]
    for i in range(1, n - 1):
        d += hf[i] * w[i]
        z += d
        w[i + 1] = z / g[i + 1]
    return np.array(w)


def _numerov_2d(f: np.ndarray, h: float, w0=None, w1=None) -> np.ndarray:
    """Same recurrence for a batch of columns, f of shape (n, m)."""
    h2 = h * h
    g = 1.0 - h2 * f / 12.0
    hf = h2 * f
    w = np.zeros_like(f)
    w[0] = 0.0 if w0 is None else w0
    w[1] = h if w1 is None else w1
    z = g[1] * w[1]
    d = z - g[0] * w[0]
    for i in range(1, f.shape[0] - 1):
        d += hf[i] * w[i]
        z = z + d
        w[i + 1] = z / g[i + 1]
    return w


def _taylor_step(w, dw, f3, h):
    """w(r + h) from w, w' at r, given w'' = f w and f sampled at r, r+h, r+2h (right side)."""
    f0, f1, f2 = f3
    fp = (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h)
    fpp = (f0 - 2.0 * f1 + f2) / (h * h)
    d2 = f0 * w
    d3 = fp * w + f0 * dw
    d4 = fpp * w + 2.0 * fp * dw + f0 * d2
    return w + h * dw + h * h / 2.0 * d2 + h ** 3 / 6.0 * d3 + h ** 4 / 24.0 * d4


def _numerov(f: np.ndarray, h: float, jumps: dict) -> np.ndarray:
    """Regular solution on all rows of ``f``, restarting at interior jumps.

    ``f`` holds left limits; ``jumps`` maps a node index to the right limit
    there (a scalar, or a row for batched columns). At each jump w and w' are
    carried across and the recurrence is restarted with a Taylor step.
    """
    batch = f.ndim == 2
    n = f.shape[0]
    w = np.zeros_like(f)
    lo, w0, w1 = 0, None, None
    for i in sorted(jumps) + [n - 1]:
        seg = f[lo: i + 1]
        if lo > 0:
            seg = seg.copy()
            seg[0] = jumps[lo]
        if batch:
            part = _numerov_2d(seg, h, w0, w1)
        else:
            part = _numerov_1d(seg, h, seg.shape[0], 0.0 if w0 is None else w0, w1)
        w[lo: i + 1] = part
        if i == n - 1:
            break
        dw = _end_derivative(part, seg, h)
        right = f[i: i + 3].copy()
        right[0] = jumps[i]
        w0 = part[-1]
        w1 = _taylor_step(w0, dw, right, h)
        lo = i
    return w


def _end_derivative(w, f, h):
    """w'(r_n) from the last three nodes, O(h^4), using w'' = f w."""
    d2 = f[-3:] * w[-3:]
    return (w[-1] - w[-2]) / h + h * (7.0 * d2[-1] + 6.0 * d2[-2] - d2[-3]) / 24.0


def _require_local(model):
    if isinstance(model, SeparableModel):
        raise UnsupportedOperation("separable kernels are solved in closed form (analytic_solutions)")
    if not isinstance(model, LocalPotential):
        raise TypeError(f"expected a local potential, got {type(model).__name__}")


def _match_index(model, grid: RadialGrid) -> int:
    rc = model.range_cutoff
    m = max(2, math.ceil(rc / grid.h - 1e-9))
    if m > grid.n_points - 1:
        raise ConfigurationError(f"grid (r_max={grid.r_max}) does not extend beyond the range cutoff {rc}")
    return m


def _interior_profile(model, grid: RadialGrid, m: int) -> tuple[np.ndarray, dict]:
    r = grid.r[: m + 1]
    rc = model.range_cutoff
    inside = r <= rc * (1 + 1e-12)
    u = np.where(inside, model.interior(np.minimum(r, rc)), 0.0)
    jumps = {}
    for bp in getattr(model, "breakpoints", ()):
        i = int(round(bp / grid.h))
        if not 0 < i < m or abs(i * grid.h - bp) > 1e-9 * bp:
            continue
        right = float(model.interior(bp * (1 + 1e-10)))
        if 2 <= i <= m - 3:
            jumps[i] = right
        else:
            # too close to either end to restart: the mean keeps second order
            u[i] = 0.5 * (u[i] + right)
    return u, jumps


@dataclass
class _Interior:
    w: np.ndarray
    m: int
    r_m: float
    w_m: float
    dw_m: float


def _solve_interior(model, energy: float, grid: RadialGrid) -> _Interior:
    m = _match_index(model, grid)
    u, jumps = _interior_profile(model, grid, m)
    f = u - energy
    w = _numerov(f, grid.h, {i: v - energy for i, v in jumps.items()})
    dw = _end_derivative(w, f, grid.h)
    return _Interior(w, m, m * grid.h, w[-1], dw)


def _free_continuation(r, r0, w0, dw0, energy):
    x = np.asarray(r) - r0
    with np.errstate(over="ignore", invalid="ignore"):
        if energy > 0:
            k = math.sqrt(energy)
            return w0 * np.cos(k * x) + dw0 / k * np.sin(k * x)
        if energy < 0:
            q = math.sqrt(-energy)
            return w0 * np.cosh(q * x) + dw0 / q * np.sinh(q * x)
    return w0 + dw0 * x


def integrate_outward(model, energy_term: float, grid: RadialGrid) -> np.ndarray:
    """Regular solution of w'' = (U - E) w sampled on ``grid``.

    ``energy_term`` is E itself: +k^2 for scattering, -alpha^2 for bound
    states. The scale is fixed by w(h) = h. Beyond the range cutoff the exact
    free solution is used.
    """
    _require_local(model)
    sol = _solve_interior(model, float(energy_term), grid)
    out = np.empty(grid.n_points)
    out[: sol.m + 1] = sol.w
    out[sol.m + 1:] = _free_continuation(grid.r[sol.m + 1:], sol.r_m, sol.w_m, sol.dw_m, energy_term)
    return out


def _node_count(w: np.ndarray) -> int:
    s = np.sign(w[1:])
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _origin_coeffs(r: np.ndarray, w: np.ndarray, h: float) -> np.ndarray:
    """Polynomial in r/h fitted to w/r on nodes 1..12; its value at 0 is w'(0)."""
    rr = r[1:13]
    return np.polyfit(rr / h, w[1:13] / rr, 7)


# --------------------------------------------------------------------------
# States
# --------------------------------------------------------------------------

class _SampledState:
    """Shared interpolation logic; subclasses define the exterior form."""

    grid: RadialGrid
    match_index: int
    origin_coeffs: Optional[np.ndarray]
    exact: Optional[Callable]
    exact_slope0: Optional[float]

    @property
    def r(self) -> np.ndarray:
        return self.grid.r

    @property
    def r_match(self) -> float:
        return self.match_index * self.grid.h

    @cached_property
    def _spline(self):
        m = self.match_index
        return CubicSpline(self.grid.r[: m + 1], self._samples[: m + 1])

    def _exterior(self, r):
        raise NotImplementedError

    def at(self, r):
        """Wave function at arbitrary radii (spline inside, exact form outside)."""
        r = np.asarray(r, dtype=float)
        if self.exact is not None:
            return self.exact(r)
        out = np.where(r <= self.r_match, self._spline(np.minimum(r, self.r_match)), self._exterior(np.maximum(r, self.r_match)))
        return out if out.ndim else float(out)

    def over_r(self, r):
        """Wave function divided by r; below 10 h a local polynomial in r gives the r -> 0 limit."""
        r = np.asarray(r, dtype=float)
        h = self.grid.h
        if self.exact is not None:
            near = r < 1e-8
            safe = np.where(near, 1.0, r)
            out = np.where(near, self.slope0, self.exact(safe) / safe)
        else:
            near = r < 10 * h
            safe = np.where(near, 10 * h, r)
            out = np.where(near, np.polyval(self.origin_coeffs, r / h), self.at(safe) / safe)
        return out if out.ndim else float(out)

    @property
    def slope0(self) -> float:
        """Derivative at the origin."""
        if self.exact is not None:
            return self.exact_slope0
        return float(np.polyval(self.origin_coeffs, 0.0))


@dataclass(frozen=True, eq=False)
class BoundState(_SampledState):
    """Normalised bound state u_alpha sampled on ``grid``.

    Attributes
    ----------
    alpha : float
        Decay wavenumber, E = -alpha^2.
    u : ndarray
        Samples of u_alpha on ``grid.r`` (unit norm, positive tail).
    n_as : float
        Asymptotic constant: u = n_as * exp(-alpha r) beyond the potential.
    node_count : int
        Number of interior nodes (0 for 1s, 1 for 2s, ...).
    """

    alpha: float
    u: np.ndarray
    n_as: float
    node_count: int
    grid: RadialGrid
    match_index: int
    origin_coeffs: Optional[np.ndarray] = field(default=None, repr=False)
    model: object = None
    exact: Optional[Callable] = field(default=None, repr=False)
    exact_slope0: Optional[float] = None

    @property
    def energy(self) -> float:
        return -self.alpha ** 2

    @property
    def _samples(self):
        return self.u

    def _exterior(self, r):
        return self.n_as * np.exp(-self.alpha * r)

    def tail_norm(self, r0: float) -> float:
        """Integral of u^2 from r0 to infinity using the exact tail."""
        return self.n_as ** 2 * math.exp(-2 * self.alpha * r0) / (2 * self.alpha)

    def norm(self) -> float:
        """Simpson over the whole grid plus the analytic tail beyond r_max."""
        return float(simpson(self.u ** 2, x=self.grid.r)) + self.tail_norm(self.grid.r_max)


@dataclass(frozen=True, eq=False)
class ScatteringState(_SampledState):
    """Real standing-wave solution v(k, r) -> sin(k r + delta)/k.

    ``delta`` is on the continuous branch anchored at delta(0) = 0;
    ``delta_folded`` is the same value folded into (-pi/2, pi/2] and
    ``winding`` the integer with delta = delta_folded + winding*pi.
    """

    k: float
    delta: float
    winding: int
    v: np.ndarray
    grid: RadialGrid
    match_index: int
    origin_coeffs: Optional[np.ndarray] = field(default=None, repr=False)
    model: object = None
    exact: Optional[Callable] = field(default=None, repr=False)
    exact_slope0: Optional[float] = None

    @property
    def delta_folded(self) -> float:
        return self.delta - self.winding * math.pi

    @property
    def smatrix(self) -> complex:
        return complex(np.exp(2j * self.delta))

    @property
    def _samples(self):
        return self.v

    def _exterior(self, r):
        return np.sin(self.k * r + self.delta) / self.k


# --------------------------------------------------------------------------
# Bound and virtual states
# --------------------------------------------------------------------------

def _mismatch_batch(model, alphas: np.ndarray, grid: RadialGrid) -> np.ndarray:
    m = _match_index(model, grid)
    u, jumps = _interior_profile(model, grid, m)
    f = u[:, None] + alphas[None, :] ** 2
    w = _numerov(f, grid.h, {i: v + alphas ** 2 for i, v in jumps.items()})
    dw = _end_derivative(w, f, grid.h)
    wm = w[-1]
    return (dw + alphas * wm) / np.hypot(dw, alphas * wm)


def _mismatch(model, alpha: float, grid: RadialGrid) -> float:
    sol = _solve_interior(model, -alpha * alpha, grid)
    return (sol.dw_m + alpha * sol.w_m) / math.hypot(sol.dw_m, alpha * sol.w_m)


def _default_window(model) -> tuple[float, float]:
    depth = max(-model.min_value, 0.0)
    return (1e-4, math.sqrt(depth) if depth > 0 else 1e-3)


def _roots_in_window(model, grid: RadialGrid, lo: float, hi: float) -> list[float]:
    alphas = np.linspace(lo, hi, SCAN_POINTS)
    vals = _mismatch_batch(model, alphas, grid)
    roots = []
    for i in range(SCAN_POINTS - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            roots.append(float(alphas[i]))
            continue
        if a * b < 0:
            try:
                root = brentq(lambda x: _mismatch(model, x, grid), alphas[i], alphas[i + 1],
                              xtol=ALPHA_XTOL, rtol=4 * np.finfo(float).eps, maxiter=MAX_ITERATIONS)
            except RuntimeError as exc:
                raise NumericalFailure(f"root refinement in [{alphas[i]}, {alphas[i + 1]}] did not converge") from exc
            roots.append(root)
    return roots


def _build_bound_state(model, alpha: float, grid: RadialGrid) -> BoundState:
    sol = _solve_interior(model, -alpha * alpha, grid)
    nodes = _node_count(sol.w)
    interior_norm = float(simpson(sol.w ** 2, x=grid.r[: sol.m + 1]))
    n_raw = sol.w_m * math.exp(alpha * sol.r_m)
    total = interior_norm + n_raw ** 2 * math.exp(-2 * alpha * sol.r_m) / (2 * alpha)
    scale = math.copysign(1.0 / math.sqrt(total), n_raw)
    u = np.empty(grid.n_points)
    u[: sol.m + 1] = scale * sol.w
    u[sol.m + 1:] = scale * n_raw * np.exp(-alpha * grid.r[sol.m + 1:])
    return BoundState(alpha=alpha, u=u, n_as=abs(scale * n_raw), node_count=nodes, grid=grid,
                      match_index=sol.m, origin_coeffs=_origin_coeffs(grid.r, u, grid.h), model=model)


def find_bound_states(model, grid: Optional[RadialGrid] = None, window=None,
                      max_levels: Optional[int] = None, h: float = DEFAULT_STEP) -> list[BoundState]:
    """All bound states with alpha inside ``window``, deepest first.

    The log-derivative mismatch against the exact decaying tail at the range
    cutoff is scanned on 200 points, each sign change is refined to
    |d alpha| < 1e-10, and every state is normalised with the analytic tail.
    Without ``grid`` a common grid reaching 20/alpha beyond the cutoff of the
    shallowest state is built.
    """
    _require_local(model)
    lo, hi = window if window is not None else _default_window(model)
    if not (lo > 0):
        raise DomainError("bound-state window must have alpha_min > 0")
    if hi <= lo:
        return []
    scan_grid = grid if grid is not None else RadialGrid.for_model(model, h, r_max=model.range_cutoff + 1.0)
    roots = _roots_in_window(model, scan_grid, lo, hi)
    if not roots:
        return []
    if grid is None:
        grid = RadialGrid.for_model(model, h, alpha=min(roots))
    states = [_build_bound_state(model, a, grid) for a in roots]
    states.sort(key=lambda s: s.node_count)
    return states[:max_levels] if max_levels else states


def find_virtual_states(model, window=None, h: float = DEFAULT_STEP) -> list[float]:
    """Negative alpha with a growing exp(|alpha| r) tail (poles on the negative imaginary k axis).

    ``window`` is given in |alpha|; returned values are negative and sorted by
    distance from threshold.
    """
    _require_local(model)
    lo, hi = window if window is not None else _default_window(model)
    grid = RadialGrid.for_model(model, h, r_max=model.range_cutoff + 1.0)
    roots = _roots_in_window(model, grid, -hi, -lo)
    return sorted(roots, key=abs)


def bound_state_count(model, h: float = DEFAULT_STEP) -> int:
    """Number of bound states from the nodes of the zero-energy solution (Sturm count)."""
    _require_local(model)
    grid = RadialGrid.for_model(model, h, r_max=model.range_cutoff + 1.0)
    sol = _solve_interior(model, 0.0, grid)
    n = _node_count(sol.w)
    # the straight-line continuation crosses zero once more if it heads down
    if sol.w_m * sol.dw_m < 0:
        n += 1
    return n


# --------------------------------------------------------------------------
# Scattering
# --------------------------------------------------------------------------

def extract_phase_shift(r, w, k: float, r1: float, r2: float) -> tuple[float, float]:
    """Match samples to C*sin(k r + delta) at two radii.

    ``r1`` and ``r2`` are snapped to the nearest mesh points. Returns
    (delta, C) with delta folded into (-pi/2, pi/2]; C may be negative.
    """
    r = np.asarray(r, dtype=float)
    w = np.asarray(w, dtype=float)
    i1 = int(np.argmin(np.abs(r - r1)))
    i2 = int(np.argmin(np.abs(r - r2)))
    x1, x2 = r[i1], r[i2]
    s = math.sin(k * (x2 - x1))
    if abs(s) < math.sin(1e-3):
        raise ConfigurationError(f"k*(r2-r1)={k * (x2 - x1):.6g} is too close to a multiple of pi")
    # w_i = p sin(k x_i) + q cos(k x_i),  p = C cos(delta), q = C sin(delta)
    a = np.array([[math.sin(k * x1), math.cos(k * x1)], [math.sin(k * x2), math.cos(k * x2)]])
    p, q = np.linalg.solve(a, [w[i1], w[i2]])
    delta = math.atan2(q, p)
    amp = math.hypot(p, q)
    if delta > math.pi / 2:
        delta -= math.pi
        amp = -amp
    elif delta <= -math.pi / 2:
        delta += math.pi
        amp = -amp
    return delta, amp


def scattering_state(model, k: float, grid: Optional[RadialGrid] = None, *,
                     n_bound: Optional[int] = None) -> ScatteringState:
    """Standing-wave scattering solution normalised to sin(k r + delta)/k.

    ``n_bound`` (the Levinson offset) is computed from the zero-energy
    solution when not supplied.
    """
    _require_local(model)
    if not k > 0:
        raise DomainError(f"scattering wavenumber must be positive, got {k}")
    if grid is None:
        grid = RadialGrid.for_model(model, alpha=None, k=k)
    rc = model.range_cutoff
    if grid.r_max < rc + 2 * math.pi / k - 1e-9:
        raise ConfigurationError(f"r_max={grid.r_max} shorter than range_cutoff + 2*pi/k = {rc + 2 * math.pi / k}")
    energy = k * k
    sol = _solve_interior(model, energy, grid)
    w = np.empty(grid.n_points)
    w[: sol.m + 1] = sol.w
    w[sol.m + 1:] = _free_continuation(grid.r[sol.m + 1:], sol.r_m, sol.w_m, sol.dw_m, energy)

    r1 = grid.r[sol.m + 1]
    delta_f, amp = extract_phase_shift(grid.r, w, k, r1, r1 + 0.5 * math.pi / k)

    # continuous branch: Prufer angle at the match point, minus Levinson's offset
    nodes = _node_count(sol.w)
    sgn = -1.0 if nodes % 2 else 1.0
    theta = nodes * math.pi + math.atan2(sgn * k * sol.w_m, sgn * sol.dw_m)
    if n_bound is None:
        n_bound = bound_state_count(model, grid.h)
    delta_c = theta - k * sol.r_m - n_bound * math.pi
    winding = int(round((delta_c - delta_f) / math.pi))
    if abs(delta_c - delta_f - winding * math.pi) > 1e-6:
        raise NumericalFailure("phase-branch bookkeeping inconsistent with the two-point match")
    v = (-1.0) ** winding * w / (amp * k)
    return ScatteringState(k=float(k), delta=delta_f + winding * math.pi, winding=winding, v=v, grid=grid,
                           match_index=sol.m, origin_coeffs=_origin_coeffs(grid.r, v, grid.h), model=model)


# --------------------------------------------------------------------------
# Diagnostics
# --------------------------------------------------------------------------

def fit_exponential_tail(r, u, window) -> tuple[float, float]:
    """Least-squares fit of log u = log N - alpha r on ``window``; returns (alpha, N)."""
    r = np.asarray(r, dtype=float)
    u = np.asarray(u, dtype=float)
    lo, hi = window
    sel = (r >= lo) & (r <= hi)
    if np.count_nonzero(sel) < 2:
        raise FitError("fewer than two samples inside the fit window")
    if np.any(u[sel] <= 0):
        raise FitError("wave function is not positive throughout the fit window")
    slope, intercept = np.polyfit(r[sel], np.log(u[sel]), 1)
    return -float(slope), float(math.exp(intercept))


def asymptotic_normalization(state: BoundState, fit_window=None) -> float:
    """N_as from an exponential fit of the sampled tail.

    The fitted decay rate must reproduce ``state.alpha`` to 1e-6 relative.
    """
    if fit_window is None:
        lo = state.r_match + 1.0
        fit_window = (lo, min(state.grid.r_max, lo + 5.0 / state.alpha))
    if state.model is not None and fit_window[0] <= state.model.range_cutoff:
        raise ConfigurationError("fit window must start beyond the range cutoff")
    alpha, n_as = fit_exponential_tail(state.r, state.u, fit_window)
    if abs(alpha - state.alpha) > 1e-6 * state.alpha:
        raise FitError(f"fitted decay {alpha} differs from alpha={state.alpha}")
    return n_as


def _check_same_mesh(a, b):
    if abs(a.grid.h - b.grid.h) > 1e-14 * a.grid.h:
        raise ConfigurationError(f"states live on different meshes (h={a.grid.h} vs {b.grid.h})")


def _split_simpson(y, grid, m, n):
    r = grid.r
    return float(simpson(y[: m + 1], x=r[: m + 1]) + simpson(y[m: n], x=r[m: n]))


def overlap(b1: BoundState, b2: BoundState) -> float:
    """Integral of u1*u2 over [0, inf) with exact tails beyond the common extent."""
    _check_same_mesh(b1, b2)
    n = min(b1.grid.n_points, b2.grid.n_points)
    m = max(b1.match_index, b2.match_index)
    inner = _split_simpson(b1.u[:n] * b2.u[:n], b1.grid, m, n)
    R = (n - 1) * b1.grid.h
    a = b1.alpha + b2.alpha
    return inner + b1.n_as * b2.n_as * math.exp(-a * R) / a


def orthogonality_defect(b: BoundState, s: ScatteringState) -> float:
    """|<u_alpha | v_k>| with the exp*sin tail beyond the common extent added exactly."""
    if b.model is not None and s.model is not None and b.model is not s.model:
        raise ConfigurationError("bound and scattering states belong to different models")
    _check_same_mesh(b, s)
    n = min(b.grid.n_points, s.grid.n_points)
    m = max(b.match_index, s.match_index)
    inner = _split_simpson(b.u[:n] * s.v[:n], b.grid, m, n)
    R = (n - 1) * b.grid.h
    a, k, ph = b.alpha, s.k, s.k * R + s.delta
    tail = b.n_as / k * math.exp(-a * R) * (a * math.sin(ph) + k * math.cos(ph)) / (a * a + k * k)
    return abs(inner + tail)


def smatrix_imaginary_axis(model, q: float, h: float = DEFAULT_STEP) -> float:
    """S(k) at k = i q from the outward solution, S = -B/A for w = A e^{q r} + B e^{-q r}.

    Real for real q; diverges at bound-state poles (A -> 0).
    """
    _require_local(model)
    if q == 0:
        raise DomainError("q must be nonzero")
    grid = RadialGrid.for_model(model, h, r_max=model.range_cutoff + 1.0)
    sol = _solve_interior(model, -q * q, grid)
    grow = 0.5 * (sol.w_m + sol.dw_m / q) * math.exp(-q * sol.r_m)
    decay = 0.5 * (sol.w_m - sol.dw_m / q) * math.exp(q * sol.r_m)
    return -decay / grow
