"""Majority edge colourings from lists.

Exact verifiers, the split/evenize/orient/bipartite pipeline with Galvin list
colouring, discrepancy and frugal colourers, a resampling colourer with its
degree thresholds, and exhaustive oracles for small instances.
"""

from .colouring import (
    Colouring,
    ListAssignment,
    ToleranceFn,
    VerificationReport,
    VertexToleranceFn,
    check_excessive,
    discrepancy_of,
    verify_majority,
    verify_proper,
    verify_vertex_tolerance,
)
from .graph import Graph, build_graph
from .oracle import Instance, brute_force, build_counterexample, count_feasible
from .pipeline import (
    PipelineConfig,
    color_discrepancy,
    color_frugal_regular,
    color_majority_1k,
    color_majority_alpha,
    color_via_discretization,
)
from .stochastic import moser_tardos_color, uniform_vector_params

__all__ = [
    "Colouring",
    "Graph",
    "Instance",
    "ListAssignment",
    "PipelineConfig",
    "ToleranceFn",
    "VerificationReport",
    "VertexToleranceFn",
    "brute_force",
    "build_counterexample",
    "build_graph",
    "check_excessive",
    "color_discrepancy",
    "color_frugal_regular",
    "color_majority_1k",
    "color_majority_alpha",
    "color_via_discretization",
    "count_feasible",
    "discrepancy_of",
    "moser_tardos_color",
    "uniform_vector_params",
    "verify_majority",
    "verify_proper",
    "verify_vertex_tolerance",
]
