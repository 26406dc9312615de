"""Fixed instances with known data, used by tests, the CLI and the fuzzer."""

from __future__ import annotations

from typing import List, Tuple

from .branches import BranchSpec, ContactSpec
from .graph import PlumbingGraph, graph_from_dict

# f = (y^2 - x^3)^2 - x^5 y: one branch with characteristic (4; 6, 7)
EXAMPLE_BRANCHES = ([BranchSpec(4, (6, 7))], ContactSpec())

EXAMPLE_GRAPH = {
    "vertices": [
        {"id": "E1", "euler": -3},
        {"id": "E2", "euler": -2},
        {"id": "E3", "euler": -3},
        {"id": "E4", "euler": -2},
        {"id": "E5", "euler": -1},
    ],
    "edges": [["E1", "E3"], ["E2", "E3"], ["E3", "E5"], ["E4", "E5"]],
    "arrows": [{"vertex": "E5", "multiplicity": 1}],
}

# f = x^2 (y^2 - x^4): the line x = 0 twice, and y = x^2, y = -x^2
NONREDUCED_BRANCHES = (
    [BranchSpec(1, (), 2), BranchSpec(1), BranchSpec(1)],
    ContactSpec(((0, 1, 1), (0, 2, 1), (1, 2, 2))),
)

NONREDUCED_GRAPH = {
    "vertices": [{"id": "E1", "euler": -2}, {"id": "E2", "euler": -1}],
    "edges": [["E1", "E2"]],
    "arrows": [
        {"vertex": "E1", "multiplicity": 2},
        {"vertex": "E2", "multiplicity": 1},
        {"vertex": "E2", "multiplicity": 1},
    ],
}

# f = y^2 - x^3
CUSP_BRANCHES = ([BranchSpec(2, (3,))], ContactSpec())

SMOOTH_GRAPH = {
    "vertices": [{"id": "E1", "euler": -1}],
    "edges": [],
    "arrows": [{"vertex": "E1", "multiplicity": 1}],
}


def example_graph() -> PlumbingGraph:
    return graph_from_dict(EXAMPLE_GRAPH)


def nonreduced_graph() -> PlumbingGraph:
    return graph_from_dict(NONREDUCED_GRAPH)


def smooth_graph() -> PlumbingGraph:
    return graph_from_dict(SMOOTH_GRAPH)


def branch_corpus() -> List[Tuple[str, List[BranchSpec], ContactSpec]]:
    return [
        ("example", *EXAMPLE_BRANCHES),
        ("nonreduced", *NONREDUCED_BRANCHES),
        ("cusp", *CUSP_BRANCHES),
    ]
