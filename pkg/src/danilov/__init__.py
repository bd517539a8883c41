"""Exact combinatorics of the Danilov resolution of 1/r(1,a,r-a).

The fan and lattice maps live in :mod:`danilov.lattice`, the divisor
tables in :mod:`danilov.divisor`, the McKay quiver family in
:mod:`danilov.quiver` and King stability with the explicit chamber in
:mod:`danilov.stability`.
"""

from .divisor import Divisor, divisor_DXYZ, divisor_R, divisor_X, divisor_Y, divisor_Z, tau
from .lattice import ConsistencyError, Context, danilov_fan, sigma_cone
from .quiver import are_isomorphic, distinguished_arrows, fixed_rep, mckay_quiver, rep_at
from .stability import (
    StabilityReport,
    Theta,
    certify_chamber,
    chamber_order,
    chamber_theta,
    closed_subsets,
    default_chamber_point,
    stability,
    vw_subreps,
)

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "Context",
    "Divisor",
    "StabilityReport",
    "Theta",
    "are_isomorphic",
    "certify_chamber",
    "chamber_order",
    "chamber_theta",
    "closed_subsets",
    "danilov_fan",
    "default_chamber_point",
    "distinguished_arrows",
    "divisor_DXYZ",
    "divisor_R",
    "divisor_X",
    "divisor_Y",
    "divisor_Z",
    "fixed_rep",
    "mckay_quiver",
    "rep_at",
    "sigma_cone",
    "stability",
    "tau",
    "vw_subreps",
]
