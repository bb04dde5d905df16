"""Optimal destabilizing vectors, limit points and Shatz strata, in exact arithmetic.

Modules
-------
cone   : projection onto polyhedral cones, linear minimization on cone∩sphere
torus  : linear torus actions (maximal weight, optimal class, limit, strata)
gl     : Hom(V, V0) and chains of maps under products of general linear groups
gauge  : Harder-Narasimhan filtrations of bundles and holomorphic pairs
cli    : the ``destab`` command line front end
"""
__version__ = "0.1.0"

from .cone import (
    InnerProduct,
    KKTCertificate,
    PolyhedralCone,
    Ray,
    SignedSquare,
    check_kkt,
    min_linear_on_sphere_cone,
    project_cone,
)
from .torus import (
    OptimalClass,
    Semistable,
    SupportVector,
    WeightSystem,
    enumerate_strata,
    hermitian_class,
    initial_pairing,
    induced_problem,
    limit_point,
    maximal_weight,
    optimal_destabilizing,
    verify_limit_semistable,
)
