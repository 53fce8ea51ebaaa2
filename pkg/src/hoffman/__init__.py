"""Hoffman-type spectral lower bounds and the exact oracles that check them."""

from .bounds import clustering_bound, covering_bound, hoffman_bound, improve_weight_bound
from .clustering import clustering_number_exact
from .coloring import chromatic_number
from .covers import Psi, covering_number_exact, find_edge_cover
from .graph import WeightedGraph, emit_graph6, generate, parse_graph6, stats
from .spectral import extreme_eigenpairs, gram_quotient, minimize_gram_quotient
from .vector_coloring import simplex_frame, solve_vector_chromatic

__all__ = [
    "Psi",
    "WeightedGraph",
    "chromatic_number",
    "clustering_bound",
    "clustering_number_exact",
    "covering_bound",
    "covering_number_exact",
    "emit_graph6",
    "extreme_eigenpairs",
    "find_edge_cover",
    "generate",
    "gram_quotient",
    "hoffman_bound",
    "improve_weight_bound",
    "minimize_gram_quotient",
    "parse_graph6",
    "simplex_frame",
    "solve_vector_chromatic",
    "stats",
]
