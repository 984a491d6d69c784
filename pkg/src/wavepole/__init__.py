"""
wavepole: low-energy scattering wave functions near bound-state and
virtual-state poles of the S-matrix.

Reduced units hbar^2/2m = 1 are used everywhere. The main entry points are

* `potentials` for model construction,
* `radial_solver` for bound states, phase shifts and wave functions,
* `analytic_solutions` for closed forms (well, Yamaguchi),
* `pole_extrapolation` for the ratio R(k, r), its series and crossover radii,
* `coulomb` and `perturbation` for the Coulomb and two-potential checks.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigurationError,
    DomainError,
    FitError,
    NearPoleError,
    NodeSingularityError,
    NumericalFailure,
    UnsupportedOperation,
    WavepoleError,
)
from .potentials import (
    make_bargmann,
    make_gaussian,
    make_spherical_well,
    make_tabulated,
    make_yamaguchi,
)
from .radial_solver import (
    BoundState,
    RadialGrid,
    ScatteringState,
    find_bound_states,
    find_virtual_states,
    scattering_state,
)
