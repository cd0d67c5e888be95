"""Riemannian geometry of left-invariant metrics, computed from structure constants."""

from .algebra import (
    BasisChange,
    DerivationSpace,
    JacobiReport,
    LieAlgebra,
    adjoint,
    change_basis,
    derivation_space,
    derived_series,
    killing_form,
    lower_central_series,
    profile,
    trace_vector,
    validate,
)
from .catalog import catalog
from .curvature import (
    MetricFrame,
    box_ricci,
    connection,
    covariant_derivative_ricci,
    orthonormalize,
    ricci_closed_form,
    ricci_from_connection,
    riemann,
    scalar_curvature,
)
from .extension import rank_one_extend, solve_einstein_extension
from .flow import flow_step, integrate
from .hcgravity import HCParameters, check_solution, lagrangian_density, phi_tensor, solve_parameters
from .soliton import (
    SearchConfig,
    detect_su2,
    einstein_check,
    find_negative_scalar_metric,
    solve_nilsoliton,
    soliton_project,
)

__version__ = "0.1.0"

__all__ = [
    "BasisChange",
    "DerivationSpace",
    "HCParameters",
    "JacobiReport",
    "LieAlgebra",
    "MetricFrame",
    "SearchConfig",
    "adjoint",
    "box_ricci",
    "catalog",
    "change_basis",
    "check_solution",
    "connection",
    "covariant_derivative_ricci",
    "derivation_space",
    "derived_series",
    "detect_su2",
    "einstein_check",
    "find_negative_scalar_metric",
    "flow_step",
    "integrate",
    "killing_form",
    "lagrangian_density",
    "lower_central_series",
    "orthonormalize",
    "phi_tensor",
    "profile",
    "rank_one_extend",
    "ricci_closed_form",
    "ricci_from_connection",
    "riemann",
    "scalar_curvature",
    "solve_einstein_extension",
    "solve_nilsoliton",
    "solve_parameters",
    "soliton_project",
    "trace_vector",
    "validate",
]
