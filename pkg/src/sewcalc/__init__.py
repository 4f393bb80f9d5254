"""Sewing diagrams, saddle interactions and constancy targets for open string operations."""

from .analyzer import (
    AnalysisReport,
    ConstClassValue,
    Signature,
    SubgroupDescriptor,
    Tensor,
    analyze,
    classify_cobordism,
    coproduct_target,
    disc_operation_target,
    iterated_coproduct_target,
    product_with_fundamental,
    theorem_A_value,
)
from .branes import TOP, Brane, BraneContext, FormalIntersection, degree_range, intersect, rank_upper_bound
from .graph import EdgeUnion, Point, SewingGraph, TypeI, TypeII, TypeIII, apply_move, head, make_edge_union, tail, validate, vertex_census
from .normalizer import NormalForm, collapse_simultaneous, corner_specialize, deform_to_saddle, equivalent, normal_form
from .saddle import InteractionPoint, SaddleDiagram, build_saddle, interaction_codimension, saddle_degree_shift, sewing_degree_shift
from .sewing import SewingDiagram, canonical_decomposition, compose, decompose, edge_count_relation, extend, mirror

__version__ = "0.1.0"
