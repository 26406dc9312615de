from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resgraph.branches import resolve
from resgraph.calculus import edge_decorations, numerical_data_linear
from resgraph.corpus import CUSP_BRANCHES, example_graph, nonreduced_graph, smooth_graph
from resgraph.errors import NotAChain, NotAdjacent, UnknownComponent
from resgraph.fuzz import FuzzConfig, random_instance
from resgraph.graph import graph_from_dict, validate
from resgraph.theorems import (
    END_MINUS,
    END_PLUS,
    EQUAL_PLUS,
    STRICT_MINUS,
    caterpillar_shape,
    check_all,
    check_cmn,
    check_lemma_arrows_both_sides,
    check_lemma_chain_end,
    check_lemma_chain_star,
    check_lemma_two_chains,
    check_main_theorem,
    contract_unimodular_tails,
    maximal_chains,
    nu_bound,
)


def setup(g):
    return edge_decorations(g), numerical_data_linear(g)


@pytest.fixture
def example():
    return setup(example_graph())


def test_contraction_keep_e5(example):
    d, _ = example
    g0 = contract_unimodular_tails(d, "E5")
    assert g0 == d.graph
    assert any(g0.valency(u) >= 3 for u in g0.branch("E5", "E3"))


def test_contraction_keep_e3(example):
    d, _ = example
    g0 = contract_unimodular_tails(d, "E3")
    assert [(v.id, v.euler) for v in g0.vertices] == [("E1", -3), ("E2", -2), ("E3", -1)]
    assert validate(g0).violations == [("no arrows", "the strict transform must have at least one branch", ())]


def test_contraction_single_vertex():
    d, _ = setup(smooth_graph())
    assert contract_unimodular_tails(d, "E1") == d.graph
    with pytest.raises(UnknownComponent):
        contract_unimodular_tails(d, "E7")


@pytest.mark.parametrize(
    "v, case, a, b, slack",
    [
        ("E5", STRICT_MINUS, 13, 2, 0),
        ("E4", END_MINUS, 7, 1, 0),
        ("E3", EQUAL_PLUS, 3, 2, 0),
        ("E1", END_PLUS, 1, 1, 0),
        ("E2", END_PLUS, 2, 1, 0),
    ],
)
def test_nu_bound_example(example, v, case, a, b, slack):
    d, nd = example
    nb = nu_bound(d, nd, v)
    assert (nb.case, nb.a, nb.b, nb.slack, nb.bound_holds) == (case, a, b, slack, True)
    assert nb.minus_directions <= 1
    if nb.is_minus:
        assert nb.expansion == nd.nu[v]


def test_nu_values_example(example):
    d, nd = example
    assert nu_bound(d, nd, "E5").bound == 11
    assert nu_bound(d, nd, "E4").bound == 6
    assert nu_bound(d, nd, "E3").bound == 5


def test_arrows_both_sides():
    d, nd = setup(nonreduced_graph())
    r = check_lemma_arrows_both_sides(d, nd, "E1", "E2", 2)
    assert r.hypothesis_met and r.conclusion_holds and r.slack == 0
    assert nd.ratio("E1") == nd.ratio("E2") == Fraction(1, 2)
    d, nd = setup(example_graph())
    r = check_lemma_arrows_both_sides(d, nd, "E3", "E5", 2)
    assert not r.hypothesis_met and r.conclusion_holds is None
    with pytest.raises(NotAdjacent):
        check_lemma_arrows_both_sides(d, nd, "E1", "E4", 2)


def test_chain_star(example):
    d, nd = example
    r = check_lemma_chain_star(d, nd, "E5", "E3", 2)
    assert r.hypothesis_met and r.conclusion_holds
    assert (r.lhs, r.rhs) == (Fraction(11, 26), Fraction(1, 2))
    assert not check_lemma_chain_star(d, nd, "E5", "E3", 4).hypothesis_met
    d2, nd2 = setup(nonreduced_graph())
    r = check_lemma_chain_star(d2, nd2, "E1", "E2", 2)
    assert not r.hypothesis_met and r.notes["shape"] == "arrows beyond the edge"
    assert caterpillar_shape(d.graph, "E5", "E3") == (True, "ok")
    assert caterpillar_shape(d.graph, "E3", "E5")[0] is False


@pytest.mark.parametrize(
    "chain, dd, rhs, slack",
    [
        (("E1", "E3"), 4, Fraction(9, 20), Fraction(1, 30)),
        (("E2", "E3"), 6, Fraction(19, 42), Fraction(1, 28)),
        (("E4", "E5"), 13, Fraction(79, 182), Fraction(1, 91)),
    ],
)
def test_chain_end_example(example, chain, dd, rhs, slack):
    d, nd = example
    r = check_lemma_chain_end(d, nd, chain, dd)
    assert r.hypothesis_met and r.conclusion_holds
    assert (r.rhs, r.slack) == (rhs, slack)


def test_chain_end_cusp_sharp():
    d, nd = setup(resolve(*CUSP_BRANCHES))
    for chain, dd in ((("E1", "E3"), 2), (("E2", "E3"), 3)):
        r = check_lemma_chain_end(d, nd, chain, dd)
        assert r.hypothesis_met and r.conclusion_holds and r.slack == 0
        assert r.lhs == Fraction(5, 6)


def test_chain_validation(example):
    d, nd = example
    for bad in (("E1",), ("E3", "E1"), ("E1", "E5"), ("E1", "E3", "E1")):
        with pytest.raises(NotAChain):
            check_lemma_chain_end(d, nd, bad, 2)


def test_two_chains(example):
    d, nd = example
    r = check_lemma_two_chains(d, nd, "E3", 2)
    assert r.hypothesis_met and r.conclusion_holds and r.lhs == Fraction(5, 12)
    assert not check_lemma_two_chains(d, nd, "E5", 2).hypothesis_met
    assert not any(check_lemma_two_chains(d, nd, v, 5).hypothesis_met for v in d.graph.ids)


def test_main_theorem_examples(example):
    d, nd = example
    r = check_main_theorem(d, nd, ["E4"], 13)
    assert r.hypothesis_met and r.conclusion_holds and r.witness == "E5"
    assert (r.lhs, r.rhs) == (Fraction(11, 26), Fraction(79, 182))
    assert r.to_dict() == {
        "check": "main_theorem", "I": ["E4"], "d": 13, "hypothesis": True, "holds": True, "witness": "E5",
        "lhs": "11/26", "rhs": "79/182", "slack": "1/91", "notes": {"disjunct": "from E4"},
    }
    r = check_main_theorem(d, nd, ["E3", "E5"], 2)
    assert r.hypothesis_met and r.conclusion_holds and r.witness == "E3"
    assert r.notes["disjunct"] == "direct"
    r = check_main_theorem(d, nd, ["E5"], 13)
    assert not r.hypothesis_met and r.conclusion_holds is None
    with pytest.raises(NotAdjacent):
        check_main_theorem(d, nd, ["E1", "E4"], 2)


def test_cmn_examples(example):
    d, nd = example
    r = check_cmn(d, nd, ["E3", "E5"], 2)
    assert r.conclusion_holds and r.rhs == Fraction(11, 26) and r.trivial
    r = check_cmn(d, nd, ["E4"], 13)
    assert r.conclusion_holds and r.rhs == Fraction(79, 182) and not r.trivial


def test_check_all_corpus():
    d, nd = setup(example_graph())
    reports = check_all(d, nd, 26)
    assert reports and not any(r.failed for r in reports)
    d, nd = setup(nonreduced_graph())
    reports = check_all(d, nd, 6)
    assert not any(r.failed for r in reports)
    assert any(r.check == "lemma_arrows_both_sides" and r.d == 2 and r.sharp for r in reports)
    d, nd = setup(smooth_graph())
    assert all(r.check == "nu_bound" for r in check_all(d, nd, 30))


def test_maximal_chains(example):
    d, _ = example
    assert maximal_chains(d.graph) == [["E1", "E3"], ["E2", "E3"], ["E4", "E5"]]


def test_failures_sort_first():
    g = example_graph()
    d, nd = setup(g)
    # corrupt nu at E3 so the two-chains and main checks fail
    bogus = type(nd)(dict(nd.N), {**nd.nu, "E3": 11}, nd.arrow_N, nd.arrow_nu)
    reports = check_all(d, bogus, 26)
    assert reports[0].failed
    first_ok = next(k for k, r in enumerate(reports) if not r.failed)
    assert not any(r.failed for r in reports[first_ok:])


def test_reported_hypothesis_never_false_conclusion():
    g = graph_from_dict(
        {"vertices": [{"id": "A", "euler": -1}], "edges": [], "arrows": [{"vertex": "A"}]}
    )
    d, nd = setup(g)
    r = check_main_theorem(d, nd, ["A"], 3)
    assert not r.hypothesis_met and r.to_dict()["holds"] is None


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**9))
def test_classification_independent_of_tail_order(index):
    g = resolve(*random_instance(5, index, FuzzConfig()))
    d, nd = setup(g)
    for v in g.ids:
        fwd, back = nu_bound(d, nd, v), nu_bound(d, nd, v, reverse=True)
        assert (fwd.case, fwd.a, fwd.b, fwd.bound) == (back.case, back.a, back.b, back.bound)
        assert fwd.bound_holds and fwd.minus_directions <= 1


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_check_all_on_generated(index):
    g = resolve(*random_instance(9, index, FuzzConfig()))
    d, nd = setup(g)
    assert not [r.to_dict() for r in check_all(d, nd, 30) if r.failed]
