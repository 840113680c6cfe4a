"""Graded Betti numbers of binomial edge ideals: an exact Koszul oracle,
closed-form formulas, and analysis of Betti splittings."""

from .formulas import betti_by_formula, betti_complete_graph, betti_linear_strand, betti_star
from .graph import Graph, GraphError, parse_graph, read_graph
from .ideals import EdgeIdeal, Intersection, edge_ideal_spec
from .koszul import BettiTable, KoszulOracle, betti_table, betti_table_multigraded
from .polylinalg import DEFAULT_PRIME, PrimeField
from .splitting import SplittingReport, classify, custom_partition, edge_splitting, s_partition

__all__ = [
    "BettiTable",
    "DEFAULT_PRIME",
    "EdgeIdeal",
    "Graph",
    "GraphError",
    "Intersection",
    "KoszulOracle",
    "PrimeField",
    "SplittingReport",
    "betti_by_formula",
    "betti_complete_graph",
    "betti_linear_strand",
    "betti_star",
    "betti_table",
    "betti_table_multigraded",
    "classify",
    "custom_partition",
    "edge_ideal_spec",
    "edge_splitting",
    "parse_graph",
    "read_graph",
    "s_partition",
]
