"""
The Gamow factor written as a sum over hydrogen-like poles.

Truncating the series leaves a positive tail of about 2 eta^2 / N, so the
partial sum only approaches the closed form slowly at large |eta|. At a real
k no single pole carries the value, but each pole dominates once k^2 is
brought close to its own energy.
"""

from wavepole import coulomb


def main():
    for eta in (0.5, 1.0, 3.0):
        s = coulomb.gamow_series(eta, 10_000)
        g = coulomb.gamow_factor(eta)
        print(f"eta={eta}: G={g:.10f}  series={s.value:.10f}  deficit={g - s.value:.3e}  tail={s.tail_estimate:.3e}")
    scale = coulomb.CoulombScale(1.0)
    for k in (0.3, 1.0):
        res = coulomb.pole_decomposition_residual(k, scale, 1_000_000)
        err = coulomb.single_pole_relative_error(k, scale)
        print(f"k={k}: pole-sum residual {res:.1e}, single pole off by {err:.0%}")
    for offset in (1e-2, 1e-3, 1e-4):
        print(f"n=1 dominance at offset {offset:g}: {coulomb.pole_dominance(1, scale, offset):.0f}")


if __name__ == "__main__":
    main()
