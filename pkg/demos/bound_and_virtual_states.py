"""
Bound and virtual states of a radius-1 square well.

Three depths are chosen so that the shallowest level sits at |alpha| ~ 0.159:
a nodeless bound state (U0 = 2.8), a bound state with one node (U0 = 22.547)
and a virtual state just below threshold (U0 = 21.913). The shooting results
are compared with the roots of the closed-form matching condition.
"""

from wavepole import analytic_solutions as exact
from wavepole import make_spherical_well
from wavepole.radial_solver import find_bound_states, find_virtual_states


def main():
    for depth in (2.8, 22.547, 21.913):
        model = make_spherical_well(depth, 1.0)
        print(f"U0 = {depth}")
        closed = exact.well_alpha_roots(depth, 1.0)
        for b, ref in zip(find_bound_states(model), closed):
            print(f"  bound   alpha={b.alpha:.9f}  closed={ref:.9f}  nodes={b.node_count}  N_as={b.n_as:.6f}")
        for a in find_virtual_states(model)[:1]:
            print(f"  virtual alpha={a:.9f}")


if __name__ == "__main__":
    main()
