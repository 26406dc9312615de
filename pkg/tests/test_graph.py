import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resgraph import linalg
from resgraph.corpus import EXAMPLE_GRAPH, example_graph, nonreduced_graph, smooth_graph
from resgraph.errors import DanglingEdge, DuplicateId, ParseError
from resgraph.fuzz import FuzzConfig, random_instance
from resgraph.graph import export_dot, graph_from_dict, intersection_matrix, parse_graph, validate
from resgraph.branches import resolve
from resgraph.calculus import edge_decorations, numerical_data_linear


def rules(g):
    return [rule for rule, _, _ in validate(g).violations]


def test_corpus_graphs_validate():
    for g in (example_graph(), nonreduced_graph(), smooth_graph()):
        assert validate(g).ok


def test_round_trip():
    g = example_graph()
    assert parse_graph(g.to_json()) == g
    assert json.loads(g.to_json()) == EXAMPLE_GRAPH
    assert parse_graph(g.to_json(indent=2)) == g


@pytest.mark.parametrize(
    "text, error",
    [
        ('{"vertices":[],"edges":[],"arrows":[]}', ParseError),
        ('{"vertices":[{"id":"E1","euler":-1},{"id":"E1","euler":-2}],"edges":[],"arrows":[]}', DuplicateId),
        ('{"vertices":[{"id":"E1","euler":-1}],"edges":[["E1","E9"]],"arrows":[]}', DanglingEdge),
        ('{"vertices":[{"id":"E1","euler":-1}],"edges":[],"arrows":[{"vertex":"E2","multiplicity":1}]}', DanglingEdge),
        ('{"vertices":[{"id":"E1","euler":"x"}],"edges":[],"arrows":[]}', ParseError),
        ('{"vertices":[{"id":"E1","euler":-1}],"edges":[["E1","E1"]],"arrows":[]}', ParseError),
    ],
)
def test_parse_errors(text, error):
    with pytest.raises(error):
        parse_graph(text)


def test_parse_error_has_position():
    with pytest.raises(ParseError, match="line 2 column"):
        parse_graph('{"vertices":\n  [,]}')


def test_validate_rejections():
    two = graph_from_dict(
        {"vertices": [{"id": "A", "euler": -1}, {"id": "B", "euler": -1}], "edges": [],
         "arrows": [{"vertex": "A", "multiplicity": 1}]}
    )
    assert "not connected" in rules(two)
    cyc = graph_from_dict(
        {"vertices": [{"id": v, "euler": -3} for v in "ABC"], "edges": [["A", "B"], ["B", "C"], ["C", "A"]],
         "arrows": [{"vertex": "A", "multiplicity": 1}]}
    )
    assert "cycle" in rules(cyc)
    flat = graph_from_dict({"vertices": [{"id": "A", "euler": 0}], "edges": [], "arrows": [{"vertex": "A"}]})
    assert {"euler", "not negative definite", "determinant"} <= set(rules(flat))
    big = graph_from_dict({"vertices": [{"id": "A", "euler": -2}], "edges": [], "arrows": [{"vertex": "A"}]})
    assert rules(big) == ["determinant"]
    bare = graph_from_dict({"vertices": [{"id": "A", "euler": -1}], "edges": [], "arrows": []})
    assert rules(bare) == ["no arrows"]


def test_intersection_matrix():
    assert intersection_matrix(smooth_graph()) == [[-1]]
    assert intersection_matrix(nonreduced_graph()) == [[-2, 1], [1, -1]]
    m = intersection_matrix(example_graph())
    assert m == [list(r) for r in zip(*m)]
    assert abs(linalg.det(m)) == 1


def test_dot_annotated():
    g = example_graph()
    d = edge_decorations(g)
    nd = numerical_data_linear(g)
    dot = export_dot(g, {k: v for k, v in d.decorations.items() if isinstance(k[1], str)},
                     {v: (nd.N[v], nd.nu[v]) for v in g.ids}, list(zip(nd.arrow_N, nd.arrow_nu)))
    assert dot.startswith("graph resolution {")
    assert '"E5(26,11)"' in dot
    assert '"E3" -- "E5" [taillabel="1", headlabel="13"];' in dot


def test_dot_plain_and_arrow_label():
    plain = export_dot(example_graph())
    assert '[label="E5"]' in plain and "E5(" not in plain
    assert '"arrow0" [label="(1)"' in plain
    g = nonreduced_graph()
    nd = numerical_data_linear(g)
    assert '"(2,1)"' in export_dot(g, arrow_data=list(zip(nd.arrow_N, nd.arrow_nu)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_generated_graphs_are_unimodular_trees(index):
    g = resolve(*random_instance(7, index, FuzzConfig()))
    assert len(g.ids) == len(g.edges) + 1
    m = intersection_matrix(g)
    assert linalg.is_negative_definite(m)
    assert abs(linalg.det(m)) == 1
    assert parse_graph(g.to_json()) == g
