"""Eisenbud-Neumann edge decorations and the numerical data (N, nu).

Numerical data are computed two independent ways:

* :func:`numerical_data_linear` solves the two linear systems on the
  intersection matrix (the total transform of ``f`` is numerically trivial
  on every exceptional curve; adjunction gives ``K.E = -E^2 - 2``);
* :func:`numerical_data_diagram` uses only the edge decorations, via the
  diagram calculus ``N_i = sum_j l_ij N_j`` over arrows and
  ``nu_i = sum_j l_ij (2 - delta_j)`` over exceptional vertices.

Arrow edges carry decoration 1. The factor ``l_ii`` is the product of all
decorations at ``E_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Dict, List, Optional, Tuple, Union

from . import linalg
from .errors import AxiomViolation, NonIntegralData, UnknownComponent
from .graph import PlumbingGraph, ValidationReport, intersection_matrix

# a component is a vertex id (exceptional) or an arrow index (strict transform)
Component = Union[str, int]


@dataclass(frozen=True)
class DecoratedGraph:
    graph: PlumbingGraph
    # (vertex, neighbour id) for exceptional edges, (vertex, arrow index) for arrow edges
    decorations: Dict[Tuple[str, Component], int]

    def toward(self, v: str, w: Component) -> int:
        return self.decorations[(v, w)]

    def at(self, v: str) -> List[int]:
        """All decorations next to ``v``: exceptional edges first, then arrows."""
        g = self.graph
        return [self.decorations[(v, w)] for w in g.adjacency[v]] + [
            self.decorations[(v, k)] for k in g.arrows_at[v]
        ]

    def large_at(self, v: str) -> List[Tuple[str, int]]:
        """Neighbours of ``v`` whose decoration next to ``v`` exceeds 1."""
        return [(w, self.decorations[(v, w)]) for w in self.graph.adjacency[v] if self.decorations[(v, w)] > 1]

    def to_list(self) -> List[dict]:
        g = self.graph
        return [
            {"vertex": v, "toward": w, "value": self.decorations[(v, w)]}
            for v in g.ids
            for w in g.adjacency[v]
        ]


@dataclass(frozen=True)
class NumericalData:
    N: Dict[str, int]
    nu: Dict[str, int]
    arrow_N: Tuple[int, ...]
    arrow_nu: Tuple[int, ...]

    def ratio(self, c: Component) -> Fraction:
        if isinstance(c, int):
            return Fraction(self.arrow_nu[c], self.arrow_N[c])
        return Fraction(self.nu[c], self.N[c])

    def pair(self, c: Component) -> Tuple[int, int]:
        if isinstance(c, int):
            return self.arrow_N[c], self.arrow_nu[c]
        return self.N[c], self.nu[c]

    @property
    def lct(self) -> Fraction:
        return lct(self)

    def same_as(self, other: "NumericalData") -> bool:
        return (
            self.N == other.N
            and self.nu == other.nu
            and self.arrow_N == other.arrow_N
            and self.arrow_nu == other.arrow_nu
        )


def format_rational(q: Fraction) -> str:
    """Rationals are always written ``p/q`` (integers as plain ``p``)."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def edge_decorations(g: PlumbingGraph, check: bool = True) -> DecoratedGraph:
    """Decorate every edge end by the |det| of the subgraph beyond it.

    Raises :class:`AxiomViolation` if ``check`` and any decoration axiom
    fails.
    """
    decorations: Dict[Tuple[str, Component], int] = {}
    for v in g.ids:
        for w in g.adjacency[v]:
            decorations[(v, w)] = abs(g.subgraph_det(v, w))
        for k in g.arrows_at[v]:
            decorations[(v, k)] = 1
    dg = DecoratedGraph(g, decorations)
    if check:
        report = check_axioms(dg)
        if not report.ok:
            rule, detail, _ = report.violations[0]
            raise AxiomViolation(f"{rule}: {detail}")
    return dg


def edge_decorations_bareiss(g: PlumbingGraph) -> Dict[Tuple[str, str], int]:
    """Same exceptional-edge decorations via dense Bareiss determinants (slow reference)."""
    m = intersection_matrix(g)
    idx = g.index
    out = {}
    for v in g.ids:
        for w in g.adjacency[v]:
            part = sorted(idx[u] for u in g.branch(v, w))
            out[(v, w)] = abs(linalg.det(linalg.submatrix(m, part)))
    return out


def check_axioms(d: DecoratedGraph) -> ValidationReport:
    """Positivity, coprimality, at most two > 1, and the edge determinant rule."""
    g = d.graph
    report = ValidationReport()
    for (v, w), value in d.decorations.items():
        if value < 1:
            report.add("positive", f"decoration {value} at {v} toward {w}", (v,))
        if isinstance(w, int) and value != 1:
            report.add("arrow decoration", f"arrow edge at {v} carries {value}", (v,))
    for v in g.ids:
        values = d.at(v)
        for x in range(len(values)):
            for y in range(x + 1, len(values)):
                if gcd(values[x], values[y]) != 1:
                    report.add("coprime", f"decorations {values[x]}, {values[y]} at {v} share a factor", (v,))
        big = sum(1 for x in values if x > 1)
        if big > 2:
            report.add("at most two > 1", f"{big} decorations exceed 1 at {v}", (v,))
    total = {v: prod(d.at(v)) for v in g.ids}
    for a, b in g.edges:
        da = d.toward(a, b)
        db = d.toward(b, a)
        if da < 1 or db < 1:
            continue
        others = (total[a] // da) * (total[b] // db)
        if da * db - others != 1:
            report.add(
                "edge determinant",
                f"{da}*{db} - {others} = {da * db - others} on edge {a}-{b}",
                (a, b),
            )
    return report


def chain_from(g: PlumbingGraph, v: str, w: str) -> Optional[List[str]]:
    """If the direction ``v -> w`` is a chain ending in a valency-1 vertex of
    the full graph, return it (ordered from ``w`` outward), else ``None``.

    Interior chain vertices have full valency 2, so a chain carries no arrows.
    """
    out = [w]
    prev, u = v, w
    while True:
        fv = g.full_valency(u)
        if fv == 1:
            return out
        if fv != 2 or g.arrows_at[u]:
            return None
        (nxt,) = [x for x in g.adjacency[u] if x != prev]
        out.append(nxt)
        prev, u = u, nxt


def check_minimality(d: DecoratedGraph) -> ValidationReport:
    """A decoration at the start of a chain toward a valency-1 end must exceed 1."""
    g = d.graph
    report = ValidationReport()
    for v in g.ids:
        for w in g.adjacency[v]:
            if chain_from(g, v, w) is not None and d.toward(v, w) <= 1:
                report.add(
                    "minimality",
                    f"chain from {v} toward {w} starts with decoration {d.toward(v, w)}",
                    (v, w),
                )
    return report


def valencies(g: PlumbingGraph) -> Dict[str, int]:
    return {v: g.valency(v) for v in g.ids}


def _as_positive_int(x: Fraction, what: str) -> int:
    if x.denominator != 1 or x <= 0:
        raise NonIntegralData(f"{what} = {format_rational(x)} is not a positive integer")
    return x.numerator


def numerical_data_linear(g: PlumbingGraph) -> NumericalData:
    a = intersection_matrix(g)
    rhs_n = [-sum(g.arrows[k].multiplicity for k in g.arrows_at[v]) for v in g.ids]
    rhs_k = [-v.euler - 2 for v in g.vertices]
    n_sol = linalg.solve_exact(a, rhs_n)
    k_sol = linalg.solve_exact(a, rhs_k)
    N = {v: _as_positive_int(x, f"N[{v}]") for v, x in zip(g.ids, n_sol)}
    nu = {v: _as_positive_int(x + 1, f"nu[{v}]") for v, x in zip(g.ids, k_sol)}
    return NumericalData(
        N, nu, tuple(arrow.multiplicity for arrow in g.arrows), tuple(1 for _ in g.arrows)
    )


def path_factor(d: DecoratedGraph, i: str, j: Component) -> int:
    """Product of the decorations adjacent to, but not on, the path from ``i`` to ``j``.

    ``j`` is a vertex id or an arrow index. For ``j == i`` this is the product
    of all decorations at ``i``.
    """
    g = d.graph
    if i not in g.index:
        raise UnknownComponent(f"unknown vertex {i!r}")
    if isinstance(j, int):
        if not 0 <= j < len(g.arrows):
            raise UnknownComponent(f"unknown arrow {j!r}")
        vertex_path = g.path(i, g.arrows[j].vertex)
        nodes: List[Component] = list(vertex_path) + [j]
    else:
        if j not in g.index:
            raise UnknownComponent(f"unknown vertex {j!r}")
        vertex_path = g.path(i, j)
        nodes = list(vertex_path)
    result = 1
    for s, u in enumerate(vertex_path):
        on_path = set()
        if s > 0:
            on_path.add(nodes[s - 1])
        if s + 1 < len(nodes):
            on_path.add(nodes[s + 1])
        for w in g.adjacency[u]:
            if w not in on_path:
                result *= d.toward(u, w)
        for k in g.arrows_at[u]:
            if k not in on_path:
                result *= d.toward(u, k)
    return result


def path_factors_from(d: DecoratedGraph, i: str) -> Tuple[Dict[str, int], List[int]]:
    """All ``l_ij`` for fixed ``i`` in one traversal: vertices, then arrows by index."""
    g = d.graph
    total = {u: prod(d.at(u)) for u in g.ids}
    vert: Dict[str, int] = {}
    arrow = [0] * len(g.arrows)
    # prefix = product of off-path decorations over path vertices before u
    stack: List[Tuple[str, Optional[str], int]] = [(i, None, 1)]
    while stack:
        u, parent, prefix = stack.pop()
        own = total[u] if parent is None else total[u] // d.toward(u, parent)
        vert[u] = prefix * own
        for k in g.arrows_at[u]:
            arrow[k] = prefix * (own // d.toward(u, k))
        for x in g.adjacency[u]:
            if x != parent:
                stack.append((x, u, prefix * (own // d.toward(u, x))))
    return vert, arrow


def numerical_data_diagram(d: DecoratedGraph) -> NumericalData:
    g = d.graph
    delta = valencies(g)
    N: Dict[str, int] = {}
    nu: Dict[str, int] = {}
    for i in g.ids:
        vert, arrow = path_factors_from(d, i)
        N[i] = sum(arrow[k] * a.multiplicity for k, a in enumerate(g.arrows))
        nu[i] = sum(vert[j] * (2 - delta[j]) for j in g.ids)
    return NumericalData(
        N, nu, tuple(arrow.multiplicity for arrow in g.arrows), tuple(1 for _ in g.arrows)
    )


def lct(nd: NumericalData) -> Fraction:
    """Minimum of nu/N over every component, arrows included."""
    ratios = [Fraction(nd.nu[v], nd.N[v]) for v in nd.N]
    ratios += [Fraction(nu, n) for n, nu in zip(nd.arrow_N, nd.arrow_nu)]
    return min(ratios)


def analysis_dict(d: DecoratedGraph, nd: NumericalData) -> dict:
    """The ``analyze`` JSON payload."""
    g = d.graph
    return {
        "decorations": d.to_list(),
        "data": [{"id": v, "N": nd.N[v], "nu": nd.nu[v], "delta": g.valency(v)} for v in g.ids],
        "arrows": [
            {"vertex": a.vertex, "N": nd.arrow_N[k], "nu": nd.arrow_nu[k]}
            for k, a in enumerate(g.arrows)
        ],
        "lct": format_rational(lct(nd)),
    }


def analyze(g: PlumbingGraph) -> Tuple[DecoratedGraph, NumericalData]:
    d = edge_decorations(g)
    return d, numerical_data_linear(g)
