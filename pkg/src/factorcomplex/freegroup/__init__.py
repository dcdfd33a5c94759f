from .stallings import StallingsGraph, contains, fold, intersect, is_subgroup
from .truncated import (
    FreeFactorSystem,
    build_truncated_CB,
    build_truncated_PD,
    enumerate_bases,
    truncated_partial_decompositions,
)
from .whitehead import is_primitive, whitehead_minimize, whitehead_moves
from .words import Word, all_reduced_words, free_reduce

__all__ = [
    "Word",
    "free_reduce",
    "all_reduced_words",
    "StallingsGraph",
    "fold",
    "contains",
    "intersect",
    "is_subgroup",
    "whitehead_moves",
    "whitehead_minimize",
    "is_primitive",
    "enumerate_bases",
    "build_truncated_CB",
    "build_truncated_PD",
    "truncated_partial_decompositions",
    "FreeFactorSystem",
]
