"""Wiring graphs, the graphical category of properads, and graphical sets."""
from .gamma import (
    DecoratedGraph,
    GammaMorphism,
    InvalidMorphism,
    classify,
    compose,
    factor_through,
    hom_set,
    is_valid_gamma_morphism,
    reedy_factorize,
)
from .graph import (
    Biprofile,
    GraphError,
    GraphParseError,
    WiringGraph,
    canonical_form,
    find_isomorphisms,
    format_graph,
    make_corolla,
    make_exceptional_edge,
    make_linear_graph,
    make_pgc,
    parse_graph,
    validate_graph,
    weakly_isomorphic,
)
from .presheaf import (
    GraphicalSet,
    NerveGraphicalSet,
    Representable,
    TruncatedGraphicalSet,
    has_unique_inner_fillers,
    is_inner_kan,
    is_nerve,
    is_segal,
)
from .properad import FiniteProperad, check_properad_axioms, evaluate, free_elements, nerve, random_properad
from .substitution import SubstitutionAssignment, codegeneracy, enumerate_cofaces_into, substitute
from .universe import enumerate_graphs

__all__ = [
    "Biprofile",
    "DecoratedGraph",
    "FiniteProperad",
    "GammaMorphism",
    "GraphError",
    "GraphParseError",
    "GraphicalSet",
    "InvalidMorphism",
    "NerveGraphicalSet",
    "Representable",
    "SubstitutionAssignment",
    "TruncatedGraphicalSet",
    "WiringGraph",
    "canonical_form",
    "check_properad_axioms",
    "classify",
    "codegeneracy",
    "compose",
    "enumerate_cofaces_into",
    "enumerate_graphs",
    "evaluate",
    "factor_through",
    "find_isomorphisms",
    "format_graph",
    "free_elements",
    "has_unique_inner_fillers",
    "hom_set",
    "is_inner_kan",
    "is_nerve",
    "is_segal",
    "is_valid_gamma_morphism",
    "make_corolla",
    "make_exceptional_edge",
    "make_linear_graph",
    "make_pgc",
    "nerve",
    "parse_graph",
    "random_properad",
    "reedy_factorize",
    "substitute",
    "validate_graph",
    "weakly_isomorphic",
]
