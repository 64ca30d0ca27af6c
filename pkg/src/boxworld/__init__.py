"""Exact boxworld (generalized non-signalling theory) toolkit.

Builds boxworld systems, enumerates their state polytopes exactly and
computes the group of reversible dynamics, both by generating it from
relabellings and by exhaustive search.
"""

from boxworld.exact import RMatrix, RVector, invert, rank, solve_exact, tensor, tensor_map
from boxworld.theory import (
    LocalEffectLabel,
    SiteSpec,
    SystemSpec,
    enumerate_extremal_effects,
    gram_local,
    gram_product,
    hamming,
    identity_coeffs,
    product_effect_coeffs,
)
from boxworld.states import (
    cone_member,
    evaluate,
    is_pure_product,
    is_state,
    local_pure_state,
    pr_box_state,
    product_state,
    state_from_table,
    table_from_state,
    uniform_state,
)
from boxworld.polytope import PolytopeVRep, brute_force_vertices, enumerate_vertices
from boxworld.transforms import (
    LinearMap,
    TransformGroup,
    build_hybrid_cnot,
    generate_group,
    is_allowed,
    is_reversible_allowed,
    trivial_generators,
    trivial_group_order,
)
from boxworld.search import search_reversible_group, verify_theorem1, verify_theorem2
from boxworld.bell import chsh_value, correlator

__version__ = "0.1.0"

__all__ = [
    "RMatrix",
    "RVector",
    "invert",
    "rank",
    "solve_exact",
    "tensor",
    "tensor_map",
    "LocalEffectLabel",
    "SiteSpec",
    "SystemSpec",
    "enumerate_extremal_effects",
    "gram_local",
    "gram_product",
    "hamming",
    "identity_coeffs",
    "product_effect_coeffs",
    "cone_member",
    "evaluate",
    "is_pure_product",
    "is_state",
    "local_pure_state",
    "pr_box_state",
    "product_state",
    "state_from_table",
    "table_from_state",
    "uniform_state",
    "PolytopeVRep",
    "brute_force_vertices",
    "enumerate_vertices",
    "LinearMap",
    "TransformGroup",
    "build_hybrid_cnot",
    "generate_group",
    "is_allowed",
    "is_reversible_allowed",
    "trivial_generators",
    "trivial_group_order",
    "search_reversible_group",
    "verify_theorem1",
    "verify_theorem2",
    "chsh_value",
    "correlator",
]
