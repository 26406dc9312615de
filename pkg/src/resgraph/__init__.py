"""Exact combinatorics of embedded resolution graphs of plane curve germs."""

from .branches import BranchSpec, ContactSpec, build_cluster, multiplicity_sequence, parse_branches, resolve
from .calculus import (
    DecoratedGraph,
    NumericalData,
    analyze,
    check_axioms,
    check_minimality,
    edge_decorations,
    format_rational,
    lct,
    numerical_data_diagram,
    numerical_data_linear,
)
from .errors import ResgraphError
from .fuzz import FuzzConfig, FuzzOutcome, random_instance, run_fuzz
from .graph import Arrow, PlumbingGraph, Vertex, export_dot, intersection_matrix, parse_graph, validate
from .theorems import (
    CheckReport,
    NuBound,
    check_all,
    check_cmn,
    check_lemma_arrows_both_sides,
    check_lemma_chain_end,
    check_lemma_chain_star,
    check_lemma_two_chains,
    check_main_theorem,
    contract_unimodular_tails,
    nu_bound,
)

__version__ = "0.1.0"

__all__ = [
    "Arrow",
    "BranchSpec",
    "CheckReport",
    "ContactSpec",
    "DecoratedGraph",
    "FuzzConfig",
    "FuzzOutcome",
    "NuBound",
    "NumericalData",
    "PlumbingGraph",
    "ResgraphError",
    "Vertex",
    "analyze",
    "build_cluster",
    "check_all",
    "check_axioms",
    "check_cmn",
    "check_lemma_arrows_both_sides",
    "check_lemma_chain_end",
    "check_lemma_chain_star",
    "check_lemma_two_chains",
    "check_main_theorem",
    "check_minimality",
    "contract_unimodular_tails",
    "edge_decorations",
    "export_dot",
    "format_rational",
    "intersection_matrix",
    "lct",
    "multiplicity_sequence",
    "nu_bound",
    "numerical_data_diagram",
    "numerical_data_linear",
    "parse_branches",
    "parse_graph",
    "random_instance",
    "resolve",
    "run_fuzz",
    "validate",
]
