"""Counting homomorphisms and epimorphisms from finitely presented groups
onto finite solvable groups, via twisted cohomology and chief-series lifting."""

from .presentations import (
    Presentation,
    parse_presentation,
    builtin_presentation,
    free_reduce,
    fox_derivative,
    symbolic_jacobian,
    abelian_invariants,
)
from .groups import (
    FiniteGroupTable,
    ExtensionTower,
    builtin_group,
    chief_series,
    aut_order,
)
from .counting import hom_count, epi_count, delta, gaschutz_eulerian
from .lattice import all_subgroups, moebius, moebius_kt, moebius_weisner
from .subgrowth import hom_count_symmetric, ak_sequence, ak_normal
from .oracle import brute_hom, brute_epi, brute_lift_check

__all__ = [
    "Presentation",
    "parse_presentation",
    "builtin_presentation",
    "free_reduce",
    "fox_derivative",
    "symbolic_jacobian",
    "abelian_invariants",
    "FiniteGroupTable",
    "ExtensionTower",
    "builtin_group",
    "chief_series",
    "aut_order",
    "hom_count",
    "epi_count",
    "delta",
    "gaschutz_eulerian",
    "all_subgroups",
    "moebius",
    "moebius_kt",
    "moebius_weisner",
    "hom_count_symmetric",
    "ak_sequence",
    "ak_normal",
    "brute_hom",
    "brute_epi",
    "brute_lift_check",
]
