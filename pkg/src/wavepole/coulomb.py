"""
Coulomb values at the origin and their pole decomposition.

For an attractive Coulomb field the squared S-wave function at the origin is
the Gamow factor

    G(eta) = 2 pi eta / (exp(2 pi eta) - 1),        eta = -kappa_c / k,

which equals the partial-fraction sum

    G = pi kappa_c / k + 1 + sum_n psi_n(0)^2 / (2 alpha_n (alpha_n^2 + k^2)),

with bound levels alpha_n = kappa_c / n and psi_n(0)^2 = 4 alpha_n^3. Each
term carries the same residue as a finite-range bound-state pole, but at
physical k no single term dominates. ``eta`` is exposed directly so both
signs can be evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

DEFAULT_TERMS = 10_000


@dataclass(frozen=True)
class CoulombScale:
    """Attractive Coulomb strength kappa_c = m e^2 / hbar^2 (inverse length)."""

    kappa_c: float

    def __post_init__(self):
        if not self.kappa_c > 0:
            raise DomainError(f"kappa_c must be positive (attractive case), got {self.kappa_c}")

    def alpha(self, n):
        return self.kappa_c / np.asarray(n, dtype=float)

    def eta(self, k: float) -> float:
        """Sommerfeld parameter of the attractive field, eta = -kappa_c/k."""
        if not k > 0:
            raise DomainError("k must be positive")
        return -self.kappa_c / k


@dataclass(frozen=True)
class SeriesValue:
    """Partial sum together with an estimate of the omitted tail."""

    value: float
    n_terms: int
    tail_estimate: float


def gamow_factor(eta):
    """2 pi eta / (exp(2 pi eta) - 1), equal to 1 at eta = 0.

    ``expm1`` keeps small |eta| accurate; large positive eta underflows
    smoothly to 0 and large negative eta tends to 2 pi |eta|.
    """
    x = 2.0 * math.pi * np.asarray(eta, dtype=float)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        safe = np.where(x == 0, 1.0, x)
        out = np.where(x == 0, 1.0, safe / np.expm1(safe))
    return out if out.ndim else float(out)


def series_tail(eta: float, n_terms: int) -> float:
    """Integral estimate of 2 sum_{n > N} eta^2/(eta^2 + n^2)."""
    e2 = float(eta) ** 2
    if e2 == 0:
        return 0.0
    e = abs(float(eta))
    return 2.0 * e * (math.pi / 2 - math.atan((n_terms + 0.5) / e))


def gamow_series(eta: float, n_terms: int = DEFAULT_TERMS) -> SeriesValue:
    """-pi eta + 1 + 2 sum_{n=1}^{N} 1/(1 + n^2/eta^2).

    The dropped terms are all positive; for N >> |eta| their sum is about
    2 eta^2 / N.
    """
    if n_terms < 1:
        raise DomainError("n_terms must be at least 1")
    e2 = float(eta) ** 2
    n = np.arange(1, n_terms + 1, dtype=float)
    # summed smallest-first to limit rounding
    total = math.fsum((2.0 * e2 / (e2 + n * n))[::-1])
    return SeriesValue(-math.pi * eta + 1.0 + total, int(n_terms), series_tail(eta, n_terms))


def coulomb_bound_psi0_sq(n: int, scale: CoulombScale) -> float:
    """|psi_n(0)|^2 = 4 alpha_n^3 for the n-th S level, alpha_n = kappa_c/n."""
    if int(n) != n or n < 1:
        raise DomainError(f"level index must be an integer >= 1, got {n}")
    return 4.0 * (scale.kappa_c / n) ** 3


def _pole_terms(k2, scale: CoulombScale, n_terms: int):
    a2 = (scale.kappa_c / np.arange(1, n_terms + 1, dtype=float)) ** 2
    # psi_n(0)^2 / (2 alpha_n (alpha_n^2 + k^2)) = 2 alpha_n^2 / (alpha_n^2 + k^2)
    return 2.0 * a2 / (a2 + k2)


def pole_decomposition(k: float, scale: CoulombScale, n_terms: int = DEFAULT_TERMS) -> SeriesValue:
    """pi kappa_c/k + 1 + sum of the first ``n_terms`` pole contributions."""
    if not k > 0:
        raise DomainError("k must be positive")
    terms = _pole_terms(k * k, scale, n_terms)
    total = math.fsum(terms[::-1])
    return SeriesValue(math.pi * scale.kappa_c / k + 1.0 + total, int(n_terms),
                       series_tail(scale.eta(k), n_terms))


def pole_decomposition_residual(k: float, scale: CoulombScale, n_terms: int = DEFAULT_TERMS) -> float:
    """|G(eta(k)) - pole sum| at real k > 0."""
    return abs(gamow_factor(scale.eta(k)) - pole_decomposition(k, scale, n_terms).value)


def single_pole_relative_error(k: float, scale: CoulombScale, n: int = 1) -> float:
    """Relative error of keeping only the n-th pole term as the whole Gamow factor."""
    approx = coulomb_bound_psi0_sq(n, scale) / (2 * scale.alpha(n) * (scale.alpha(n) ** 2 + k * k))
    exact = gamow_factor(scale.eta(k))
    return abs(approx - exact) / exact


def pole_dominance(n: int, scale: CoulombScale, offset: float, n_terms: int = DEFAULT_TERMS) -> float:
    """|n-th term| / |everything else| at k^2 = -alpha_n^2 (1 - offset).

    k is taken on the positive imaginary axis, where pi kappa_c / k is
    imaginary.
    """
    if not 0 < abs(offset) < 1:
        raise DomainError("offset must satisfy 0 < |offset| < 1")
    if n > n_terms:
        raise DomainError("n must not exceed n_terms")
    a = float(scale.alpha(n))
    k2 = -a * a * (1.0 - offset)
    k = 1j * math.sqrt(-k2)
    terms = _pole_terms(k2, scale, n_terms)
    rest = math.pi * scale.kappa_c / k + 1.0 + (math.fsum(terms[::-1]) - terms[n - 1])
    return float(abs(terms[n - 1]) / abs(rest))
