"""Exact invariants of piecewise monotone interval maps.

Markov structure, incidence matrices, dynamical verdicts, dimension-group
presentations, module classification and K0 diagrams, all computed with exact
arithmetic in Q or a real quadratic field.
"""

from __future__ import annotations

from .bratteli import BratteliDiagram, K0Sequence, build_diagram, c_n_sets, export, k0_sequence
from .dimension import (
    GAElement,
    GroupPresentation,
    ModuleClassification,
    classify_module,
    ga_element,
    ga_equal,
    ga_positive,
    ga_presentation,
    is_simple,
    markov_module_vector,
)
from .disconnection import ClopenInterval, Side, XPoint, interval_image, itinerary, sigma_apply
from .field import FieldDescriptor, FieldElement, Sign, field_arith, field_sign, parse_element, sqrt
from .maps import (
    Branch,
    PwmMap,
    branch_eval,
    make_interval_exchange,
    make_restricted_tent,
    make_tent,
    tau_hat,
    tau_hat_preimage,
)
from .markov import IncidenceMatrix, condition_L, dynamics_verdict, graph_classify, incidence_matrix
from .orbits import (
    IntervalUnion,
    MarkovPartition,
    NotDetected,
    OrbitReport,
    detect_markov,
    eventual_range,
    forward_orbit,
    idoc_check,
    restrict_to_eventual_range,
)
from .transfer import StepFunction, discontinuity_set, equivalent, generators, leq, transfer_apply
from .verdict import TriState

__version__ = "0.1.0"

__all__ = [
    "BratteliDiagram", "Branch", "ClopenInterval", "FieldDescriptor", "FieldElement", "GAElement",
    "GroupPresentation", "IncidenceMatrix", "IntervalUnion", "K0Sequence", "MarkovPartition",
    "ModuleClassification", "NotDetected", "OrbitReport", "PwmMap", "Side", "Sign", "StepFunction",
    "TriState", "XPoint", "branch_eval", "build_diagram", "c_n_sets", "classify_module",
    "condition_L", "detect_markov", "discontinuity_set", "dynamics_verdict", "equivalent",
    "eventual_range", "export", "field_arith", "field_sign", "forward_orbit", "ga_element",
    "ga_equal", "ga_positive", "ga_presentation", "generators", "graph_classify", "idoc_check",
    "incidence_matrix", "interval_image", "is_simple", "itinerary", "k0_sequence", "leq",
    "make_interval_exchange", "make_restricted_tent", "make_tent", "markov_module_vector",
    "parse_element", "restrict_to_eventual_range", "sigma_apply", "sqrt", "tau_hat",
    "tau_hat_preimage", "transfer_apply",
]
