"""
Reduced potential models.

Units are fixed once for the whole package: hbar^2/2m = 1, so the reduced
potential U(r) = 2 m V(r) / hbar^2 is the only potential quantity, energies
are in 1/length^2 and a bound state at wavenumber alpha has E = -alpha^2.

Local models (spherical well, Bargmann, tabulated, and scaled sums of these)
share the `LocalPotential` interface. The Yamaguchi kernel is non-local and is
represented by `SeparableModel`; it cannot be evaluated as U(r).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, UnsupportedOperation

#: Relative magnitude below which smooth potentials are truncated to zero.
CUTOFF_RELATIVE = 1e-12


class LocalPotential:
    """Common interface of local reduced potentials.

    Subclasses provide ``range_cutoff`` and ``interior``; the truncated
    profile is derived from them.
    """

    kind: str = "local"
    range_cutoff: float

    def interior(self, r):
        """Profile on the closed interval [0, range_cutoff].

        At a discontinuity sitting exactly on ``range_cutoff`` the value from
        the inside is returned, which is what the outward integrator needs.
        """
        raise NotImplementedError

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise DomainError("potential evaluated at negative r")
        out = np.where(r < self.range_cutoff, self.interior(np.minimum(r, self.range_cutoff)), 0.0)
        return out if out.ndim else float(out)

    @property
    def depth_scale(self) -> float:
        """Largest |U| on a coarse probe of the interior, used for default windows."""
        rr = np.linspace(0.0, self.range_cutoff, 2001)
        return float(np.max(np.abs(self.interior(rr))))

    @property
    def min_value(self) -> float:
        rr = np.linspace(0.0, self.range_cutoff, 2001)
        return float(np.min(self.interior(rr)))

    @property
    def breakpoints(self) -> tuple:
        """Radii where U jumps; grids place a node on the first of them."""
        return ()

    def describe(self) -> dict:
        """Flat parameter dictionary, used for provenance columns."""
        return {"kind": self.kind, "range_cutoff": self.range_cutoff}

    def __add__(self, other):
        if not isinstance(other, LocalPotential):
            return NotImplemented
        return CombinedPotential(((1.0, self), (1.0, other)))

    def scaled(self, factor: float) -> "CombinedPotential":
        return CombinedPotential(((float(factor), self),))


@dataclass(frozen=True, eq=False)
class SphericalWell(LocalPotential):
    """U(r) = -depth for r < radius, 0 for r >= radius."""

    depth: float
    radius: float
    kind: str = field(default="SphericalWell", init=False)

    def __post_init__(self):
        if not (self.depth > 0 and self.radius > 0):
            raise DomainError(f"spherical well needs depth > 0 and radius > 0, got {self.depth}, {self.radius}")

    @property
    def range_cutoff(self) -> float:
        return self.radius

    @property
    def breakpoints(self) -> tuple:
        return (self.radius,)

    def interior(self, r):
        r = np.asarray(r, dtype=float)
        out = np.where(r <= self.radius * (1 + 1e-12), -self.depth, 0.0)
        return out if out.ndim else float(out)

    def describe(self) -> dict:
        return {"kind": self.kind, "U0": self.depth, "a": self.radius}


@dataclass(frozen=True, eq=False)
class BargmannPotential(LocalPotential):
    """One-bound-state Bargmann potential with bound wavenumber ``alpha_b``.

    U(r) = -2 (beta^2 - alpha_b^2) [cosh(beta r) - (alpha_b/beta) sinh(beta r)]^-2
    """

    beta: float
    alpha_b: float
    kind: str = field(default="Bargmann", init=False)

    def __post_init__(self):
        if not (self.beta > self.alpha_b > 0):
            raise DomainError(f"Bargmann potential needs beta > alpha_b > 0, got {self.beta}, {self.alpha_b}")
        target = math.log(CUTOFF_RELATIVE)
        u0 = abs(self._raw(0.0))
        g = lambda r: math.log(abs(self._raw(r)) / u0) - target
        hi = 1.0 / self.beta
        while g(hi) > 0:
            hi *= 2.0
        object.__setattr__(self, "_cutoff", brentq(g, 0.0, hi, xtol=1e-13))

    def _raw(self, r):
        b, a = self.beta, self.alpha_b
        e = np.exp(-2.0 * b * np.asarray(r, dtype=float))
        # cosh - (a/b) sinh, with the growing exponential factored out
        d = 0.5 * (1.0 - a / b) + 0.5 * (1.0 + a / b) * e
        return -2.0 * (b * b - a * a) * e / (d * d)

    @property
    def range_cutoff(self) -> float:
        return self._cutoff

    def interior(self, r):
        out = self._raw(r)
        return out if np.ndim(out) else float(out)

    def describe(self) -> dict:
        return {"kind": self.kind, "beta": self.beta, "alpha_b": self.alpha_b}


@dataclass(frozen=True, eq=False)
class GaussianProfile(LocalPotential):
    """U(r) = -depth * exp(-(r/width)^2), truncated at the relative cutoff.

    Mainly used as a smooth perturbing profile.
    """

    depth: float
    width: float
    kind: str = field(default="Gaussian", init=False)

    def __post_init__(self):
        if not self.width > 0:
            raise DomainError("Gaussian width must be positive")

    @property
    def range_cutoff(self) -> float:
        return self.width * math.sqrt(-math.log(CUTOFF_RELATIVE))

    def interior(self, r):
        r = np.asarray(r, dtype=float)
        out = -self.depth * np.exp(-((r / self.width) ** 2))
        return out if out.ndim else float(out)

    def describe(self) -> dict:
        return {"kind": self.kind, "depth": self.depth, "width": self.width}


@dataclass(frozen=True, eq=False)
class TabulatedPotential(LocalPotential):
    """Linearly interpolated samples; zero beyond the last sample."""

    r_points: np.ndarray
    u_points: np.ndarray
    kind: str = field(default="Tabulated", init=False)

    def __post_init__(self):
        r = np.asarray(self.r_points, dtype=float)
        u = np.asarray(self.u_points, dtype=float)
        if r.ndim != 1 or r.shape != u.shape or r.size < 2:
            raise DomainError("tabulated potential needs two equal-length 1-D arrays with >= 2 points")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(u))):
            raise DomainError("tabulated potential contains non-finite samples")
        if np.any(np.diff(r) <= 0) or r[0] < 0:
            raise DomainError("tabulated r must be nonnegative and strictly increasing")
        r.flags.writeable = False
        u.flags.writeable = False
        object.__setattr__(self, "r_points", r)
        object.__setattr__(self, "u_points", u)

    @property
    def range_cutoff(self) -> float:
        return float(self.r_points[-1])

    @property
    def breakpoints(self) -> tuple:
        return (self.range_cutoff,) if self.u_points[-1] != 0 else ()

    def interior(self, r):
        out = np.interp(r, self.r_points, self.u_points)
        return out if np.ndim(out) else float(out)

    def describe(self) -> dict:
        return {"kind": self.kind, "n_samples": int(self.r_points.size), "r_last": self.range_cutoff}


@dataclass(frozen=True, eq=False)
class CombinedPotential(LocalPotential):
    """Weighted sum of local potentials, e.g. ``U0 + eps * U1``."""

    terms: tuple
    kind: str = field(default="Combined", init=False)

    @property
    def range_cutoff(self) -> float:
        return max(p.range_cutoff for _, p in self.terms)

    @property
    def breakpoints(self) -> tuple:
        return tuple(sorted({x for w, p in self.terms if w != 0 for x in p.breakpoints}))

    def interior(self, r):
        r = np.asarray(r, dtype=float)
        total = np.zeros_like(r)
        for w, p in self.terms:
            # each term keeps its own edge; left-limit exactly on that edge
            inside = r <= p.range_cutoff * (1 + 1e-12)
            total = total + w * np.where(inside, p.interior(np.minimum(r, p.range_cutoff)), 0.0)
        return total if total.ndim else float(total)

    def __add__(self, other):
        if isinstance(other, CombinedPotential):
            return CombinedPotential(self.terms + other.terms)
        if isinstance(other, LocalPotential):
            return CombinedPotential(self.terms + ((1.0, other),))
        return NotImplemented

    def describe(self) -> dict:
        out = {"kind": self.kind}
        for i, (w, p) in enumerate(self.terms):
            out[f"term{i}_weight"] = w
            out.update({f"term{i}_{k}": v for k, v in p.describe().items()})
        return out


@dataclass(frozen=True)
class SeparableModel:
    """Yamaguchi kernel with a single bound state at E = -alpha_b^2.

    In the radial equation the kernel acts as

        u''(r) + E u(r) = -strength * exp(-beta r) * integral_0^inf exp(-beta s) u(s) ds,

    i.e. ``strength`` already absorbs the 4 pi from the angular integration and
    the 2m/hbar^2 reduction. Requiring the bound state at alpha_b fixes

        strength = 2 beta (beta + alpha_b)^2.
    """

    beta: float
    alpha_b: float
    kind: str = field(default="Yamaguchi", init=False)

    def __post_init__(self):
        if not (self.beta > self.alpha_b > 0):
            raise DomainError(f"Yamaguchi kernel needs beta > alpha_b > 0, got {self.beta}, {self.alpha_b}")

    @property
    def strength(self) -> float:
        return yamaguchi_strength(self.beta, self.alpha_b)

    @property
    def range_cutoff(self) -> float:
        # form factor exp(-beta r) falls below the relative cutoff here
        return -math.log(CUTOFF_RELATIVE) / self.beta

    def __call__(self, r):
        raise UnsupportedOperation("the Yamaguchi kernel is non-local; it has no U(r)")

    def kernel(self, r, rp):
        """Reduced radial kernel W(r, r') = -strength exp(-beta r) exp(-beta r')."""
        r = np.asarray(r, dtype=float)
        rp = np.asarray(rp, dtype=float)
        return -self.strength * np.exp(-self.beta * r) * np.exp(-self.beta * rp)

    def describe(self) -> dict:
        return {"kind": self.kind, "beta": self.beta, "alpha_b": self.alpha_b, "strength": self.strength}


def yamaguchi_strength(beta: float, alpha_b: float) -> float:
    """Kernel strength placing the only bound state at wavenumber ``alpha_b``.

    The limit alpha_b -> 0 gives the threshold strength 2 beta^3.
    """
    if not (beta > alpha_b >= 0):
        raise DomainError("need beta > alpha_b >= 0")
    return 2.0 * beta * (beta + alpha_b) ** 2


def make_spherical_well(depth: float, radius: float) -> SphericalWell:
    return SphericalWell(float(depth), float(radius))


def make_bargmann(beta: float, alpha_b: float) -> BargmannPotential:
    return BargmannPotential(float(beta), float(alpha_b))


def make_yamaguchi(beta: float, alpha_b: float) -> SeparableModel:
    return SeparableModel(float(beta), float(alpha_b))


def make_gaussian(depth: float, width: float) -> GaussianProfile:
    return GaussianProfile(float(depth), float(width))


def make_tabulated(r, u) -> TabulatedPotential:
    return TabulatedPotential(np.array(r, dtype=float), np.array(u, dtype=float))


def load_tabulated_csv(source) -> TabulatedPotential:
    """Read a two-column ``r,U`` CSV; a non-numeric first row is treated as a header.

    ``source`` is a path or an open text stream.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
    else:
        text = source.read()
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise DomainError("empty potential table")
    try:
        [float(x) for x in lines[0].split(",")[:2]]
    except ValueError:
        lines = lines[1:]
    data = np.loadtxt(io.StringIO("\n".join(lines)), delimiter=",", ndmin=2)
    if data.shape[1] != 2:
        raise DomainError(f"expected two columns (r, U), got {data.shape[1]}")
    return make_tabulated(data[:, 0], data[:, 1])


def evaluate_local(model, r):
    """U(r) for a local model; raises for the separable kernel."""
    if isinstance(model, SeparableModel):
        raise UnsupportedOperation("the Yamaguchi kernel is non-local; it has no U(r)")
    return model(r)


def is_local(model) -> bool:
    return isinstance(model, LocalPotential)
