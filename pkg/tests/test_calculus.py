from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resgraph.branches import resolve
from resgraph.calculus import (
    DecoratedGraph,
    analysis_dict,
    check_axioms,
    check_minimality,
    edge_decorations,
    edge_decorations_bareiss,
    format_rational,
    lct,
    numerical_data_diagram,
    numerical_data_linear,
    path_factor,
    path_factors_from,
    valencies,
)
from resgraph.corpus import example_graph, nonreduced_graph, smooth_graph
from resgraph.errors import AxiomViolation, NonIntegralData, UnknownComponent
from resgraph.fuzz import FuzzConfig, random_instance
from resgraph.graph import PlumbingGraph, graph_from_dict

EXAMPLE_DECORATIONS = {
    ("E5", "E3"): 13,
    ("E5", "E4"): 2,
    ("E4", "E5"): 7,
    ("E3", "E5"): 1,
    ("E3", "E1"): 3,
    ("E3", "E2"): 2,
    ("E1", "E3"): 1,
    ("E2", "E3"): 2,
}


def exceptional(d):
    return {k: v for k, v in d.decorations.items() if isinstance(k[1], str)}


def test_example_decorations():
    d = edge_decorations(example_graph())
    assert exceptional(d) == EXAMPLE_DECORATIONS
    assert d.toward("E5", 0) == 1
    assert check_axioms(d).ok
    assert check_minimality(d).ok


def test_nonreduced_and_smooth_decorations():
    d = edge_decorations(nonreduced_graph())
    assert exceptional(d) == {("E1", "E2"): 1, ("E2", "E1"): 2}
    assert check_minimality(d).ok
    assert exceptional(edge_decorations(smooth_graph())) == {}


def test_bareiss_reference_agrees():
    for g in (example_graph(), nonreduced_graph()):
        assert edge_decorations_bareiss(g) == exceptional(edge_decorations(g))


def test_decorations_ignore_vertex_order():
    g = example_graph()
    shuffled = PlumbingGraph(tuple(reversed(g.vertices)), g.edges, g.arrows)
    assert exceptional(edge_decorations(shuffled)) == exceptional(edge_decorations(g))


def test_valencies():
    assert valencies(example_graph()) == {"E1": 1, "E2": 1, "E3": 3, "E4": 1, "E5": 2}
    assert valencies(smooth_graph()) == {"E1": 0}
    assert valencies(nonreduced_graph()) == {"E1": 1, "E2": 1}


def test_numerical_data_examples():
    nd = numerical_data_linear(example_graph())
    assert [nd.N[v] for v in ("E1", "E2", "E3", "E4", "E5")] == [4, 6, 12, 13, 26]
    assert [nd.nu[v] for v in ("E1", "E2", "E3", "E4", "E5")] == [2, 3, 5, 6, 11]
    assert lct(nd) == Fraction(5, 12)
    nd = numerical_data_linear(nonreduced_graph())
    assert (nd.N, nd.nu) == ({"E1": 4, "E2": 6}, {"E1": 2, "E2": 3})
    assert list(zip(nd.arrow_N, nd.arrow_nu)) == [(2, 1), (1, 1), (1, 1)]
    assert lct(nd) == Fraction(1, 2)
    nd = numerical_data_linear(smooth_graph())
    assert (nd.N, nd.nu, lct(nd)) == ({"E1": 1}, {"E1": 2}, 1)


def test_diagram_route_on_corpus():
    for g in (example_graph(), nonreduced_graph(), smooth_graph()):
        d = edge_decorations(g)
        assert numerical_data_diagram(d) == numerical_data_linear(g)


def test_path_factors():
    d = edge_decorations(example_graph())
    assert path_factor(d, "E5", 0) == 26
    assert path_factor(d, "E3", "E4") == 6
    assert path_factor(d, "E5", "E5") == 26
    # nu_5 = 0 - 12 + 4 + 6 + 13
    assert [path_factor(d, "E5", j) for j in ("E3", "E1", "E2", "E4")] == [12, 4, 6, 13]
    assert path_factor(d, "E1", 0) == 4
    assert path_factor(edge_decorations(smooth_graph()), "E1", "E1") == 1
    d2 = edge_decorations(nonreduced_graph())
    assert path_factor(d2, "E2", 0) == 1 and path_factor(d2, "E2", 1) == 2
    with pytest.raises(UnknownComponent):
        path_factor(d, "E9", 0)
    with pytest.raises(UnknownComponent):
        path_factor(d, "E1", 3)


def test_minimality_violation():
    g = graph_from_dict(
        {"vertices": [{"id": "A", "euler": -2}, {"id": "B", "euler": -1}], "edges": [["A", "B"]],
         "arrows": [{"vertex": "A", "multiplicity": 1}]}
    )
    report = check_minimality(edge_decorations(g))
    assert [ids for _, _, ids in report.violations] == [("A", "B")]


def test_axiom_violations_detected():
    d = edge_decorations(example_graph())
    bad = dict(d.decorations)
    bad[("E5", "E3")] = 12
    rules = {rule for rule, _, _ in check_axioms(DecoratedGraph(d.graph, bad)).violations}
    assert {"coprime", "edge determinant"} <= rules
    bad = dict(d.decorations)
    bad[("E3", "E5")] = 5
    rules = {rule for rule, _, _ in check_axioms(DecoratedGraph(d.graph, bad)).violations}
    assert "at most two > 1" in rules


def test_non_resolution_graph_rejected():
    # the E8 lattice is unimodular and negative definite but has three large decorations at its node
    ids = [f"V{k}" for k in range(8)]
    edges = [[ids[k], ids[k + 1]] for k in range(6)] + [[ids[2], ids[7]]]
    e8 = graph_from_dict(
        {"vertices": [{"id": v, "euler": -2} for v in ids], "edges": edges,
         "arrows": [{"vertex": "V0", "multiplicity": 1}]}
    )
    with pytest.raises(AxiomViolation, match="at most two"):
        edge_decorations(e8)
    half = graph_from_dict({"vertices": [{"id": "A", "euler": -2}], "edges": [], "arrows": [{"vertex": "A"}]})
    with pytest.raises(NonIntegralData):
        numerical_data_linear(half)


def test_format_rational_and_payload():
    assert format_rational(Fraction(10, 24)) == "5/12"
    assert format_rational(Fraction(3)) == "3"
    d = edge_decorations(example_graph())
    payload = analysis_dict(d, numerical_data_linear(d.graph))
    assert payload["lct"] == "5/12"
    assert {"id": "E5", "N": 26, "nu": 11, "delta": 2} in payload["data"]
    assert {"vertex": "E5", "toward": "E3", "value": 13} in payload["decorations"]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_linear_equals_diagram_on_generated_graphs(index):
    g = resolve(*random_instance(11, index, FuzzConfig()))
    d = edge_decorations(g)
    assert check_axioms(d).ok
    assert numerical_data_diagram(d) == numerical_data_linear(g)
    if len(g.ids) <= 12:
        assert edge_decorations_bareiss(g) == exceptional(d)
    for i in g.ids[:3]:
        vert, arrow = path_factors_from(d, i)
        assert all(vert[j] == path_factor(d, i, j) for j in g.ids)
        assert all(arrow[k] == path_factor(d, i, k) for k in range(len(g.arrows)))
    nd = numerical_data_linear(g)
    if any(a.multiplicity == 1 for a in g.arrows):
        assert lct(nd) <= 1
