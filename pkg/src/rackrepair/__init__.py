"""Rack-aware trace repair for Reed-Solomon codes over finite field towers."""

from .experiments import __version__
from .gf_tower import (FieldTower, Subfield, TraceBasis, dual_basis, element_from_traces,
                       make_field, parse_field, span_dim_over, trace_to)
from .grs_code import (Codeword, GrsCode, encode, is_codeword, naive_recover,
                       random_message)
from .polyring import (Poly, SubspaceChoice, exact_div, interpolate, linearized_coeffs,
                       linearized_from_subspace, reduce_mod_vanishing, vanishing_poly)
from .rack_engine import (CutSetQuery, RackLayout, RepairScheme, build_download_plan,
                          cutset_bound, execute_repair, repair_standard, validate_scheme,
                          worst_case_bandwidth)
from .scheme_forge import (FamilyParams, HypothesisError, SubspaceSearchError,
                           additive_good_poly, build_family_scheme, combined_good_poly,
                           degree_descent_scheme, gw_scheme, multiplicative_good_poly,
                           two_coset_scheme, validate_family_params)

__all__ = [
    "__version__", "FieldTower", "Subfield", "TraceBasis", "dual_basis", "element_from_traces",
    "make_field", "parse_field", "span_dim_over", "trace_to", "Codeword", "GrsCode", "encode",
    "is_codeword", "naive_recover", "random_message", "Poly", "SubspaceChoice", "exact_div",
    "interpolate", "linearized_coeffs", "linearized_from_subspace", "reduce_mod_vanishing",
    "vanishing_poly", "CutSetQuery", "RackLayout", "RepairScheme", "build_download_plan",
    "cutset_bound", "execute_repair", "repair_standard", "validate_scheme",
    "worst_case_bandwidth", "FamilyParams", "HypothesisError", "SubspaceSearchError",
    "additive_good_poly", "build_family_scheme", "combined_good_poly", "degree_descent_scheme",
    "gw_scheme", "multiplicative_good_poly", "two_coset_scheme", "validate_family_params",
]
