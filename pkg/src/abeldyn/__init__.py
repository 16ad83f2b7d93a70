"""Exact dynamical degrees of correspondences on products of elliptic curves."""
__version__ = "0.1.0"

from .abelian import (
    AbelianVariety,
    EndOrder,
    Endomorphism,
    Factor,
    is_polarized,
    isogeny_degree,
    multiplication_map,
    realize_pullback,
)
from .correspondence import (
    Correspondence,
    GradedAction,
    apply_Gr,
    compose,
    degree_sequence,
    delta,
    gr_correspondence,
    graded_action,
    graph,
    intersect,
    kunneth_projectors,
    lefschetz_number,
    lieberman_pushforward,
    power,
    total_degree,
    transpose,
    transpose_graph,
)
from .errors import (
    AbeldynError,
    DegenerateError,
    InputError,
    NotIsogenyError,
    PrecisionError,
    RecurrenceError,
)
from .exterior import CohomologyModel, GradedClass, poincare_gram
from .numerical import NumericalLattice, alg_tr_split, build_Nk, induced_action

__all__ = [
    "AbeldynError", "AbelianVariety", "CohomologyModel", "Correspondence", "DegenerateError",
    "EndOrder", "Endomorphism", "Factor", "GradedAction", "GradedClass", "InputError",
    "NotIsogenyError", "NumericalLattice", "PrecisionError", "RecurrenceError", "__version__",
    "alg_tr_split", "apply_Gr", "build_Nk", "compose", "degree_sequence", "delta",
    "gr_correspondence", "graded_action", "graph", "induced_action", "intersect",
    "is_polarized", "isogeny_degree", "kunneth_projectors", "lefschetz_number",
    "lieberman_pushforward", "multiplication_map", "poincare_gram", "power",
    "realize_pullback", "total_degree", "transpose", "transpose_graph",
]
