"""
How closely a low-energy scattering function tracks the bound state.

The scattering solution is rescaled by its pole factor and divided by the
bound-state function. The ratio R(k, r) tends to 1 as k^2 -> -alpha^2; its
first two coefficients in x = alpha^2 + k^2 are fitted from six real k
values, and the radius where R = 1 is located for a few k.
"""

import numpy as np

from wavepole import make_bargmann, make_spherical_well
from wavepole import pole_extrapolation as pe


def show(name, model, r):
    b0 = pe.solve_bound_state(model)
    grid = pe.common_grid(model, b0.alpha, pe.DEFAULT_K_SAMPLES)
    b = pe.solve_bound_state(model, grid)
    series = pe.fit_ratio_series(model, b, r)
    print(f"{name}: alpha={b.alpha:.6f}")
    for ri, c1, c2 in zip(series.r, series.r1, series.r2):
        print(f"  r={ri:4.2f}  R1={c1:+.6f}  R2={c2:+.6f}")
    print(f"  limit check at x=0: {pe.theorem_limit_check(model, b):.1e}")
    for k in (0.05, 0.1, 0.2):
        print(f"  crossover r*(k={k}) = {pe.crossover_radius(model, b, k):.5f}")


def main():
    r = np.array([0.0, 0.5, 1.0, 1.5])
    show("Bargmann beta=1, alpha_b=0.1", make_bargmann(1.0, 0.1), r)
    show("well U0=2.8, a=1", make_spherical_well(2.8, 1.0), r)
    report = pe.well_r1_sign_report(2.8)
    print(report.summary())


if __name__ == "__main__":
    main()
