"""
A small extra attraction added to a weakly bound well.

First-order estimates of the energy, alpha and phase shift are compared with
exact re-solves of U0 + eps*U1. Halving eps should cut every error by about
four.
"""

from wavepole import make_gaussian, make_spherical_well
from wavepole.perturbation import consistency_report


def main():
    base = make_spherical_well(2.8, 1.0)
    for label, v1 in (("step", make_spherical_well(1.0, 1.0)), ("gaussian", make_gaussian(1.0, 0.5))):
        rep = consistency_report(base, v1, [0.04, 0.02, 0.01], [0.05, 0.1, 0.2, 0.3])
        print(f"{label} profile, alpha0={rep.alpha0:.6f}")
        for row in rep.rows:
            print(f"  eps={row.eps:<5g} dE err {row.energy_error:.2e}  alpha err {row.alpha_error:.2e}"
                  f"  phase err {row.phase_error:.2e}")
        for name, vals in rep.ratios.items():
            print(f"  {name} ratios: " + ", ".join(f"{v:.2f}" for v in vals))


if __name__ == "__main__":
    main()
