"""Inequalities between numerical data of a minimal resolution graph.

* :func:`nu_bound` -- the bound of ``nu`` by the two large decorations at a
  vertex (``nu <= a - b`` / ``nu = a + b``, or ``a - 1`` / ``a + 1`` at ends),
  classified by blowing down every unimodular tail first.
* four local lemmas (arrows on both sides of an edge; an arrowless caterpillar
  beyond an edge; a chain ending in an end vertex; two chains at a node),
* the two-part main inequality and the resulting bound
  ``c0 <= (sum nu_i + 1/d) / (sum N_i + 1)``.

Every comparison is an exact :class:`~fractions.Fraction` comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .calculus import (
    Component,
    DecoratedGraph,
    NumericalData,
    chain_from,
    edge_decorations,
    format_rational,
    lct,
)
from .errors import NotAChain, NotAdjacent, StuckContraction, UnknownComponent
from .graph import Arrow, PlumbingGraph, Vertex

STRICT_MINUS = "StrictMinus"
EQUAL_PLUS = "EqualPlus"
END_MINUS = "EndMinus"
END_PLUS = "EndPlus"


@dataclass(frozen=True)
class NuBound:
    vertex: str
    case: str
    a: int
    b: int
    nu: int
    bound: int
    bound_holds: bool
    slack: int
    minus_directions: int = 0
    # value of the closed-form expansion when the contracted graph has the
    # chain-of-stars shape, else None
    expansion: Optional[int] = None

    @property
    def is_minus(self) -> bool:
        return self.case in (STRICT_MINUS, END_MINUS)


@dataclass
class CheckReport:
    check: str
    sites: Tuple[str, ...]
    d: Optional[int]
    hypothesis_met: bool
    conclusion_holds: Optional[bool] = None
    witness: Optional[str] = None
    lhs: Optional[Fraction] = None
    rhs: Optional[Fraction] = None
    slack: Optional[Fraction] = None
    trivial: bool = False
    notes: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if not self.hypothesis_met:
            self.conclusion_holds = None

    @property
    def failed(self) -> bool:
        return self.hypothesis_met and self.conclusion_holds is False

    @property
    def sharp(self) -> bool:
        return self.hypothesis_met and bool(self.conclusion_holds) and self.slack == 0

    def to_dict(self) -> dict:
        def q(x):
            return None if x is None else format_rational(x)

        out = {
            "check": self.check,
            "I": list(self.sites),
            "d": self.d,
            "hypothesis": self.hypothesis_met,
            "holds": self.conclusion_holds,
            "witness": self.witness,
            "lhs": q(self.lhs),
            "rhs": q(self.rhs),
            "slack": q(self.slack),
        }
        if self.trivial:
            out["trivial"] = True
        if self.notes:
            out["notes"] = {k: self.notes[k] for k in sorted(self.notes)}
        return out


# ---------------------------------------------------------------------------
# contraction of unimodular tails


class _Mutable:
    def __init__(self, g: PlumbingGraph):
        self.order = {vid: k for k, vid in enumerate(g.ids)}
        self.euler = dict(g.euler)
        self.adj: Dict[str, Set[str]] = {v: set(ns) for v, ns in g.adjacency.items()}
        self.arrows: List[Arrow] = list(g.arrows)

    def blow_down(self, u: str) -> None:
        nbrs = sorted(self.adj[u], key=self.order.__getitem__)
        if self.euler[u] != -1 or len(nbrs) > 2:
            raise StuckContraction(f"{u} is not a contractible curve")
        for x in nbrs:
            self.euler[x] += 1
            self.adj[x].discard(u)
        if len(nbrs) == 2:
            x, y = nbrs
            self.adj[x].add(y)
            self.adj[y].add(x)
        del self.adj[u]
        del self.euler[u]
        self.arrows = [a for a in self.arrows if a.vertex != u]

    def freeze(self) -> PlumbingGraph:
        ids = sorted(self.euler, key=self.order.__getitem__)
        edges = []
        for a in ids:
            for b in sorted(self.adj[a], key=self.order.__getitem__):
                if self.order[a] < self.order[b]:
                    edges.append((a, b))
        return PlumbingGraph(tuple(Vertex(v, self.euler[v]) for v in ids), tuple(edges), tuple(self.arrows))


def _contract_tail(mg: _Mutable, tail: Iterable[str], reverse: bool) -> None:
    remaining = set(tail)
    while remaining:
        eligible = [u for u in remaining if mg.euler[u] == -1 and len(mg.adj[u]) <= 2]
        if not eligible:
            raise StuckContraction(
                "no (-1)-curve of valency <= 2 left among " + ", ".join(sorted(remaining, key=mg.order.__getitem__))
            )
        u = (max if reverse else min)(eligible, key=mg.order.__getitem__)
        mg.blow_down(u)
        remaining.discard(u)


def contract_unimodular_tails(d: DecoratedGraph, keep: str, reverse: bool = False) -> PlumbingGraph:
    """Blow down every subgraph cut off by a decoration 1 that does not contain ``keep``.

    Tails are taken lowest vertex (then neighbour) first in declaration
    order, or highest first with ``reverse``. Arrows on contracted curves
    are dropped. Decorations are recomputed after each sweep until no
    eligible tail remains.
    """
    g = d.graph
    if keep not in g.index:
        raise UnknownComponent(f"unknown vertex {keep!r}")
    current = g
    dec = d
    while True:
        candidates = []
        for v in current.ids:
            for w in current.adjacency[v]:
                if dec.toward(v, w) == 1:
                    part = current.branch(v, w)
                    if keep not in part:
                        candidates.append((current.index[v], current.index[w], v, w))
        if not candidates:
            return current
        candidates.sort(reverse=reverse)
        mg = _Mutable(current)
        for _, _, v, w in candidates:
            if v not in mg.adj or w not in mg.adj.get(v, ()):
                continue
            tail = _component(mg.adj, w, v)
            _contract_tail(mg, tail, reverse)
        current = mg.freeze()
        dec = edge_decorations(current, check=False)


def _component(adj, start: str, blocked: str) -> List[str]:
    out = [start]
    stack = [(start, blocked)]
    while stack:
        u, p = stack.pop()
        for x in adj[u]:
            if x != p:
                out.append(x)
                stack.append((x, u))
    return out


def _plain_chain(g: PlumbingGraph, v: str, w: str) -> bool:
    """Direction ``v -> w`` is a path in the exceptional graph (arrows ignored)."""
    prev, u = v, w
    while True:
        fwd = [x for x in g.adjacency[u] if x != prev]
        if not fwd:
            return True
        if len(fwd) > 1:
            return False
        prev, u = u, fwd[0]


def _chain_star_expansion(d0: DecoratedGraph, keep: str, toward: str, other: Optional[str]) -> Optional[int]:
    """The closed form ``a + b[sum (a_k - a_k b_k) b_1..b_{k-1} + (a_r + b_r - a_r b_r) b_1..b_{r-1}]``.

    Returns None if the contracted graph is not a chain of stars with one
    vertical chain each, ending in a star with two chains.
    """
    g0 = d0.graph
    a = d0.toward(keep, toward)
    b = 1
    if other is not None:
        if not _plain_chain(g0, keep, other):
            return None
        b = d0.toward(keep, other)
    stars: List[Tuple[int, int]] = []
    prev, u = keep, toward
    while True:
        fwd = [x for x in g0.adjacency[u] if x != prev]
        if len(fwd) == 1:
            prev, u = u, fwd[0]
            continue
        if len(fwd) != 2 or d0.toward(u, prev) != 1:
            return None
        x, y = fwd
        cx, cy = _plain_chain(g0, u, x), _plain_chain(g0, u, y)
        if cx and cy:
            stars.append((d0.toward(u, x), d0.toward(u, y)))
            break
        if not (cx or cy):
            return None
        vertical, horizontal = (x, y) if cx else (y, x)
        stars.append((d0.toward(u, horizontal), d0.toward(u, vertical)))
        prev, u = u, horizontal
    total = 0
    weight = 1
    for k, (ak, bk) in enumerate(stars):
        if k + 1 < len(stars):
            total += (ak - ak * bk) * weight
        else:
            total += (ak + bk - ak * bk) * weight
        weight *= bk
    return a + b * total


def nu_bound(d: DecoratedGraph, nd: NumericalData, v: str, reverse: bool = False) -> NuBound:
    g = d.graph
    if v not in g.index:
        raise UnknownComponent(f"unknown vertex {v!r}")
    g0 = contract_unimodular_tails(d, v, reverse=reverse)
    d0 = edge_decorations(g0, check=False)
    stars = {u for u in g0.ids if g0.valency(u) >= 3}
    minus_dirs = [w for w in g0.adjacency[v] if stars.intersection(g0.branch(v, w))]
    nu = nd.nu[v]
    end = g.valency(v) <= 1
    expansion = None
    if minus_dirs:
        toward = minus_dirs[0]
        others = [w for w in g0.adjacency[v] if w != toward]
        a = d0.toward(v, toward)
        b = d0.toward(v, others[0]) if others else 1
        if end:
            case, bound = END_MINUS, a - 1
        else:
            case, bound = STRICT_MINUS, a - b
        holds = nu <= bound
        slack = bound - nu
        expansion = _chain_star_expansion(d0, v, toward, others[0] if others else None)
    else:
        large = sorted((x for _, x in d.large_at(v)), reverse=True) + [1, 1]
        a, b = large[0], large[1]
        if end:
            case, bound = END_PLUS, a + 1
        else:
            case, bound = EQUAL_PLUS, a + b
        holds = nu == bound
        slack = 0 if holds else bound - nu
    return NuBound(v, case, a, b, nu, bound, holds, slack, len(minus_dirs), expansion)


def nu_bound_report(d: DecoratedGraph, nd: NumericalData, v: str) -> CheckReport:
    nb = nu_bound(d, nd, v)
    ok = nb.bound_holds and nb.minus_directions <= 1 and (nb.expansion is None or nb.expansion == nb.nu)
    notes = {"case": nb.case, "a": nb.a, "b": nb.b, "nu": nb.nu, "bound": nb.bound}
    if nb.minus_directions > 1:
        notes["minus_directions"] = nb.minus_directions
    if nb.expansion is not None:
        notes["expansion"] = nb.expansion
    return CheckReport(
        "nu_bound",
        (v,),
        None,
        True,
        ok,
        lhs=Fraction(nb.nu),
        rhs=Fraction(nb.bound),
        slack=Fraction(nb.slack),
        notes=notes,
    )


# ---------------------------------------------------------------------------
# lemmas


def _require_vertex(g: PlumbingGraph, *ids: str) -> None:
    for x in ids:
        if x not in g.index:
            raise UnknownComponent(f"unknown vertex {x!r}")


def _require_edge(g: PlumbingGraph, i: str, j: str) -> None:
    _require_vertex(g, i, j)
    if not g.is_adjacent(i, j):
        raise NotAdjacent(f"{i} and {j} are not adjacent")


def _has_arrow(g: PlumbingGraph, part: Iterable[str]) -> bool:
    return any(g.arrows_at[u] for u in part)


def _divides(dd: int, *values: int) -> bool:
    return all(x % dd == 0 for x in values)


def check_lemma_arrows_both_sides(d: DecoratedGraph, nd: NumericalData, i: str, j: str, dd: int) -> CheckReport:
    g = d.graph
    _require_edge(g, i, j)
    both = _has_arrow(g, g.branch(j, i)) and _has_arrow(g, g.branch(i, j))
    hyp = _divides(dd, nd.N[i], nd.N[j]) and both
    rhs = Fraction(1, dd)
    ri, rj = nd.ratio(i), nd.ratio(j)
    tight, lhs = (i, ri) if ri >= rj else (j, rj)
    return CheckReport(
        "lemma_arrows_both_sides",
        (i, j),
        dd,
        hyp,
        ri <= rhs and rj <= rhs,
        witness=tight,
        lhs=lhs,
        rhs=rhs,
        slack=rhs - lhs,
        notes={} if both else {"shape": "no arrows on one side"},
    )


def caterpillar_shape(g: PlumbingGraph, i: str, j: str) -> Tuple[bool, str]:
    """Does ``E_j`` (beyond the edge from ``E_i``) carry exactly the arrowless
    chain-of-vertical-chains subgraph, with ``E_j`` of valency 2 or 3?"""
    part = g.branch(i, j)
    if _has_arrow(g, part):
        return False, "arrows beyond the edge"
    if g.full_valency(j) not in (2, 3):
        return False, f"valency of {j} is {g.full_valency(j)}"
    prev, u = i, j
    verticals = 0
    while True:
        fwd = [x for x in g.adjacency[u] if x != prev]
        if not fwd:
            break
        if len(fwd) == 1:
            prev, u = u, fwd[0]
            continue
        if len(fwd) > 2:
            return False, f"{u} has valency {len(fwd) + 1}"
        chains = [x for x in fwd if chain_from(g, u, x) is not None]
        if not chains:
            return False, f"neither direction at {u} is a chain"
        verticals += 1
        if len(chains) == 2:
            break
        (nxt,) = [x for x in fwd if x not in chains]
        prev, u = u, nxt
    if not verticals:
        return False, "no vertical chain"
    return True, "ok"


def check_lemma_chain_star(d: DecoratedGraph, nd: NumericalData, i: str, j: str, dd: int) -> CheckReport:
    g = d.graph
    _require_edge(g, i, j)
    shape_ok, reason = caterpillar_shape(g, i, j)
    hyp = _divides(dd, nd.N[i], nd.N[j]) and shape_ok
    lhs, rhs = nd.ratio(i), Fraction(1, dd)
    return CheckReport(
        "lemma_chain_star",
        (i, j),
        dd,
        hyp,
        lhs < rhs,
        witness=i,
        lhs=lhs,
        rhs=rhs,
        slack=rhs - lhs,
        notes={} if shape_ok else {"shape": reason},
    )


def _check_chain(g: PlumbingGraph, chain: Sequence[str]) -> None:
    if len(chain) < 2:
        raise NotAChain("a chain needs at least two vertices")
    _require_vertex(g, *chain)
    if len(set(chain)) != len(chain):
        raise NotAChain("chain repeats a vertex")
    if g.full_valency(chain[0]) != 1:
        raise NotAChain(f"{chain[0]} is not an end vertex")
    for a, b in zip(chain, chain[1:]):
        if not g.is_adjacent(a, b):
            raise NotAChain(f"{a} and {b} are not adjacent")
    for u in chain[1:-1]:
        if g.full_valency(u) != 2:
            raise NotAChain(f"interior vertex {u} has valency {g.full_valency(u)}")


def check_lemma_chain_end(d: DecoratedGraph, nd: NumericalData, chain: Sequence[str], dd: int) -> CheckReport:
    g = d.graph
    chain = tuple(chain)
    _check_chain(g, chain)
    r, r1 = chain[-1], chain[-2]
    hyp = _divides(dd, nd.N[r], nd.N[r1])
    lhs = nd.ratio(r)
    rhs = (nd.nu[r1] + Fraction(1, dd)) / (nd.N[r1] + 1)
    return CheckReport("lemma_chain_end", chain, dd, hyp, lhs <= rhs, witness=r, lhs=lhs, rhs=rhs, slack=rhs - lhs)


def attached_chains(g: PlumbingGraph, i: str) -> List[List[str]]:
    return [c for c in (chain_from(g, i, w) for w in g.adjacency[i]) if c is not None]


def check_lemma_two_chains(d: DecoratedGraph, nd: NumericalData, i: str, dd: int) -> CheckReport:
    g = d.graph
    _require_vertex(g, i)
    chains = attached_chains(g, i)
    ends = None
    if g.full_valency(i) >= 3:
        for x in range(len(chains)):
            for y in range(x + 1, len(chains)):
                e1, e2 = chains[x][-1], chains[y][-1]
                if _divides(dd, nd.N[e1], nd.N[e2]):
                    ends = (e1, e2)
                    break
            if ends:
                break
    lhs, rhs = nd.ratio(i), Fraction(1, dd)
    notes: Dict[str, object] = {"chain_ends": list(ends)} if ends else {"chains": len(chains)}
    return CheckReport(
        "lemma_two_chains", (i,), dd, ends is not None, lhs < rhs, witness=i, lhs=lhs, rhs=rhs, slack=rhs - lhs, notes=notes
    )


# ---------------------------------------------------------------------------
# main inequality and the c0 bound


def _component_name(g: PlumbingGraph, c: Component) -> str:
    return f"arrow{c}" if isinstance(c, int) else c


def _meeting(g: PlumbingGraph, i: str) -> List[Component]:
    return list(g.adjacency[i]) + list(g.arrows_at[i])


def _normalise_sites(g: PlumbingGraph, I: Sequence[str]) -> Tuple[str, ...]:
    I = tuple(I)
    if len(I) not in (1, 2) or len(set(I)) != len(I):
        raise ValueError("I must consist of one or two distinct vertices")
    _require_vertex(g, *I)
    if len(I) == 2:
        _require_edge(g, *I)
    return I


def _divisibility_hypothesis(g: PlumbingGraph, nd: NumericalData, I: Tuple[str, ...], dd: int) -> bool:
    if len(I) == 1:
        (i,) = I
        return _divides(dd, nd.N[i], *(nd.pair(c)[0] for c in _meeting(g, i)))
    return _divides(dd, nd.N[I[0]], nd.N[I[1]])


def check_main_theorem(d: DecoratedGraph, nd: NumericalData, I: Sequence[str], dd: int) -> CheckReport:
    """``nu_i/N_i <= 1/d`` or ``nu_l/N_l <= (nu_i + 1/d)/(N_i + 1)``.

    For ``I = {i}`` the second alternative ranges over every component
    meeting ``E_i``; for an edge ``I = {i, j}`` it is tried with ``l = j``
    and with the roles of ``i`` and ``j`` swapped. The witness is the
    alternative with the largest slack.
    """
    g = d.graph
    I = _normalise_sites(g, I)
    hyp = _divisibility_hypothesis(g, nd, I, dd)
    inv = Fraction(1, dd)
    options: List[Tuple[Fraction, str, str, Fraction, Fraction]] = []
    pairs = [(I[0], c) for c in _meeting(g, I[0])] if len(I) == 1 else [(I[0], I[1]), (I[1], I[0])]
    for i in I:
        options.append((inv - nd.ratio(i), i, "direct", nd.ratio(i), inv))
    for i, c in pairs:
        lhs = nd.ratio(c)
        rhs = (nd.nu[i] + inv) / (nd.N[i] + 1)
        options.append((rhs - lhs, _component_name(g, c), f"from {i}", lhs, rhs))
    slack, witness, kind, lhs, rhs = max(options, key=lambda o: o[0])
    return CheckReport(
        "main_theorem", I, dd, hyp, slack >= 0, witness=witness, lhs=lhs, rhs=rhs, slack=slack, notes={"disjunct": kind}
    )


def check_cmn(d: DecoratedGraph, nd: NumericalData, I: Sequence[str], dd: int) -> CheckReport:
    """``c0 <= (sum nu_i + 1/d) / (sum N_i + 1)``, flagged trivial when ``c0 <= 1/d``."""
    g = d.graph
    I = _normalise_sites(g, I)
    hyp = _divisibility_hypothesis(g, nd, I, dd)
    c0 = lct(nd)
    rhs = (sum(nd.nu[i] for i in I) + Fraction(1, dd)) / (sum(nd.N[i] for i in I) + 1)
    return CheckReport("cmn", I, dd, hyp, c0 <= rhs, lhs=c0, rhs=rhs, slack=rhs - c0, trivial=c0 <= Fraction(1, dd))


# ---------------------------------------------------------------------------
# enumeration


def _divisors_upto(n: int, cap: int) -> List[int]:
    return [k for k in range(2, min(n, cap) + 1) if n % k == 0]


def maximal_chains(g: PlumbingGraph) -> List[List[str]]:
    """From each end vertex of the full graph, walk through valency-2 vertices."""
    out = []
    for v in g.ids:
        if g.full_valency(v) != 1 or not g.adjacency[v]:
            continue
        chain = [v]
        prev, u = None, v
        while True:
            (nxt,) = [x for x in g.adjacency[u] if x != prev]
            chain.append(nxt)
            if g.full_valency(nxt) != 2 or g.arrows_at[nxt]:
                break
            prev, u = u, nxt
        out.append(chain)
    return out


def check_all(d: DecoratedGraph, nd: NumericalData, dd_max: int, nu_bounds: bool = True) -> List[CheckReport]:
    """Run every check at every site and every feasible ``d`` in ``2..dd_max``.

    Failures come first; otherwise reports keep enumeration order (vertices,
    edges and chains in declaration order, increasing ``d``).
    """
    g = d.graph
    N = nd.N
    reports: List[CheckReport] = []
    for v in g.ids:
        if nu_bounds:
            reports.append(nu_bound_report(d, nd, v))
        around = gcd(N[v], *(nd.pair(c)[0] for c in _meeting(g, v)))
        for dd in _divisors_upto(around, dd_max):
            reports.append(check_main_theorem(d, nd, (v,), dd))
            reports.append(check_cmn(d, nd, (v,), dd))
        if g.full_valency(v) >= 3:
            chains = attached_chains(g, v)
            feasible = set()
            for x in range(len(chains)):
                for y in range(x + 1, len(chains)):
                    feasible.update(_divisors_upto(gcd(N[chains[x][-1]], N[chains[y][-1]]), dd_max))
            for dd in sorted(feasible):
                reports.append(check_lemma_two_chains(d, nd, v, dd))
    for a, b in g.edges:
        for dd in _divisors_upto(gcd(N[a], N[b]), dd_max):
            reports.append(check_lemma_arrows_both_sides(d, nd, a, b, dd))
            reports.append(check_lemma_chain_star(d, nd, a, b, dd))
            reports.append(check_lemma_chain_star(d, nd, b, a, dd))
            reports.append(check_main_theorem(d, nd, (a, b), dd))
            reports.append(check_cmn(d, nd, (a, b), dd))
    for chain in maximal_chains(g):
        for r in range(2, len(chain) + 1):
            prefix = chain[:r]
            for dd in _divisors_upto(gcd(N[prefix[-1]], N[prefix[-2]]), dd_max):
                reports.append(check_lemma_chain_end(d, nd, prefix, dd))
    return [r for r in reports if r.failed] + [r for r in reports if not r.failed]
