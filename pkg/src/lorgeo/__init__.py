"""Homogeneous geodesics on three-dimensional Lorentzian Lie groups.

Left-invariant Lorentzian metrics are given by a family tag (g1..g7) and
its parameters in a pseudo-orthonormal frame. The package computes the
connection and curvature, the isotropy filtration, geodesic vectors (by
closed-form families and by numeric search), and decides the g.o. and
naturally reductive properties.
"""
from .algebra import StructureConstants, causal_character, inner, jacobi_residual, is_unimodular
from .connection import curvature, is_locally_symmetric, levi_civita, ricci
from .enumeration import (GeodesicFamily, count_independent, enumerate_families, has_null_homogeneous,
                          stated_count, stated_has_null)
from .families import (AlgebraInstance, ConstraintViolation, FamilyParams, FamilyTag, build_family, from_mapping,
                       identify_group, invariant_D, symmetric_locus)
from .geodesics import (GeodesicVector, geodesic_residual, is_geodesic_vector, nabla_parallel_check,
                        null_directions, numeric_search)
from .isotropy import compute_h_chain, compute_l, first_stable_index, isotropy_algebra
from .reductive import check_nr_condition, find_nr_split, is_go, is_symmetric
from .report import ClassificationReport, classify, dumps

__version__ = "0.1.0"

__all__ = [
    "AlgebraInstance", "ClassificationReport", "ConstraintViolation", "FamilyParams", "FamilyTag", "GeodesicFamily",
    "GeodesicVector", "StructureConstants", "build_family", "causal_character", "check_nr_condition", "classify",
    "compute_h_chain", "compute_l", "count_independent", "curvature", "dumps", "enumerate_families",
    "find_nr_split", "first_stable_index", "from_mapping", "geodesic_residual", "has_null_homogeneous",
    "identify_group", "inner", "invariant_D", "is_geodesic_vector", "is_go", "is_locally_symmetric",
    "is_symmetric", "is_unimodular", "isotropy_algebra", "jacobi_residual", "levi_civita", "nabla_parallel_check", "null_directions",
    "numeric_search", "ricci", "stated_count", "stated_has_null", "symmetric_locus",
]
