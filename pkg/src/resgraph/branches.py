"""Minimal embedded resolution graphs from combinatorial branch data.

A branch is given by its Puiseux characteristic ``(m; beta_1, ..., beta_g)``
and its multiplicity as a factor of ``f``. Several branches are glued by
the number of infinitely-near points they share. The cluster of points to
blow up is the union of each branch's points up to its last satellite point,
extended along free points until every pair of branches is separated.

Point bookkeeping follows the Euclidean algorithm on the characteristic.
For each run of equal multiplicities produced by ``a = q*b + r``, a point
in run ``t >= 1`` is proximate to its parent and to the last point of run
``t - 1``; the first point of run ``t >= 2`` is proximate to the last points
of runs ``t - 1`` and ``t - 2``. Everything else is free.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .calculus import check_minimality, edge_decorations
from .errors import ContactBeyondBranch, InconsistentContact, InvalidCharacteristic, NonMinimal, ParseError
from .graph import Arrow, PlumbingGraph, Vertex, validate


@dataclass(frozen=True)
class BranchSpec:
    m: int
    beta: Tuple[int, ...] = ()
    factor: int = 1

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(self.beta))

    def check(self) -> None:
        """Raise :class:`InvalidCharacteristic` unless the Puiseux data are valid."""
        m, beta = self.m, self.beta
        if isinstance(m, bool) or not isinstance(m, int) or m < 1:
            raise InvalidCharacteristic(f"multiplicity must be a positive integer, got {m!r}")
        if isinstance(self.factor, bool) or not isinstance(self.factor, int) or self.factor < 1:
            raise InvalidCharacteristic(f"factor must be a positive integer, got {self.factor!r}")
        if any(isinstance(b, bool) or not isinstance(b, int) for b in beta):
            raise InvalidCharacteristic(f"characteristic exponents must be integers, got {beta!r}")
        e = m
        prev = m
        for k, b in enumerate(beta):
            if b <= prev:
                raise InvalidCharacteristic(
                    f"exponents must increase and exceed m: beta_{k + 1} = {b} <= {prev}"
                )
            if b % e == 0:
                raise InvalidCharacteristic(f"beta_{k + 1} = {b} is divisible by gcd {e}")
            e = gcd(e, b)
            prev = b
        if e != 1:
            raise InvalidCharacteristic(f"gcd(m, beta) = {e}, expected 1")

    def to_dict(self) -> dict:
        return {"m": self.m, "beta": list(self.beta), "factor": self.factor}


@dataclass(frozen=True)
class ContactSpec:
    """Pairwise counts of shared infinitely-near points; missing pairs default to 1."""

    pairs: Tuple[Tuple[int, int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))

    def matrix(self, count: int) -> List[List[Optional[int]]]:
        s: List[List[Optional[int]]] = [[None] * count for _ in range(count)]
        for i, j, shared in self.pairs:
            if not (0 <= i < count and 0 <= j < count) or i == j:
                raise InconsistentContact(f"contact pair ({i}, {j}) does not name two distinct branches")
            if isinstance(shared, bool) or not isinstance(shared, int) or shared < 1:
                raise InconsistentContact(f"shared_points for ({i}, {j}) must be >= 1, got {shared!r}")
            if s[i][j] is not None:
                raise InconsistentContact(f"contact pair ({i}, {j}) given twice")
            s[i][j] = s[j][i] = shared
        for i in range(count):
            for j in range(count):
                if i != j and s[i][j] is None:
                    s[i][j] = 1
        return s

    def to_list(self) -> List[dict]:
        return [{"i": i, "j": j, "shared_points": s} for i, j, s in self.pairs]


@dataclass
class ClusterPoint:
    parent: Optional[int]
    proximate_to: Tuple[int, ...]  # parent first, then the satellite proximity if any
    depth: int  # 0 for the origin
    multiplicities: Dict[int, int] = field(default_factory=dict)  # branch index -> multiplicity

    @property
    def is_satellite(self) -> bool:
        return len(self.proximate_to) > 1


@dataclass
class Cluster:
    points: List[ClusterPoint]
    branch_points: List[List[int]]  # per branch, the global indices of its points in order
    factors: List[int]

    def weighted_multiplicity(self, p: int) -> int:
        pt = self.points[p]
        return sum(self.factors[b] * mult for b, mult in pt.multiplicities.items())

    def proximate_points(self, p: int) -> List[int]:
        return [q for q, pt in enumerate(self.points) if p in pt.proximate_to]


def _euclid_runs(a: int, b: int) -> Tuple[List[Tuple[int, int]], int]:
    runs = []
    while b:
        q, r = divmod(a, b)
        runs.append((b, q))
        a, b = b, r
    return runs, a


def _branch_points(b: BranchSpec) -> List[Tuple[int, Tuple[int, ...]]]:
    """(multiplicity, proximate local indices) for points up to the last satellite."""
    if not b.beta:
        return [(1, ())]
    pts: List[Tuple[int, Tuple[int, ...]]] = []
    e, prev_beta = b.m, 0
    for beta in b.beta:
        runs, e_next = _euclid_runs(beta - prev_beta, e)
        last: List[int] = []
        for t, (mult, count) in enumerate(runs):
            if count == 0:
                last.append(len(pts) - 1)
                continue
            for idx in range(count):
                parent = len(pts) - 1 if pts else None
                prox = [] if parent is None else [parent]
                extra = None
                if t >= 1 and idx > 0:
                    extra = last[t - 1]
                elif t >= 2:
                    extra = last[t - 2]
                if extra is not None and extra != parent:
                    prox.append(extra)
                pts.append((mult, tuple(prox)))
            last.append(len(pts) - 1)
        e, prev_beta = e_next, beta
    return pts


def _extended_points(b: BranchSpec, length: int) -> List[Tuple[int, Tuple[int, ...]]]:
    pts = _branch_points(b)
    while len(pts) < length:
        pts.append((1, (len(pts) - 1,)))
    return pts


def multiplicity_sequence(b: BranchSpec) -> List[int]:
    """Multiplicities of the branch at its points up to the last satellite point.

    >>> multiplicity_sequence(BranchSpec(4, (6, 7)))
    [4, 2, 2, 1, 1]
    """
    b.check()
    return [mult for mult, _ in _branch_points(b)]


def _check_tree(s: List[List[Optional[int]]]) -> None:
    n = len(s)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                vals = sorted((s[i][j], s[i][k], s[j][k]))
                if vals[0] != vals[1]:
                    raise InconsistentContact(
                        f"contacts among branches {i}, {j}, {k} do not form a tree: "
                        f"{s[i][j]}, {s[i][k]}, {s[j][k]}"
                    )


def build_cluster(branches: Sequence[BranchSpec], contact: ContactSpec = ContactSpec()) -> Cluster:
    """Merge the branches' point sequences along their shared prefixes."""
    if not branches:
        raise InconsistentContact("at least one branch is required")
    for b in branches:
        b.check()
    count = len(branches)
    s = contact.matrix(count)
    _check_tree(s)
    essential = [len(_branch_points(b)) for b in branches]
    lengths = [max([essential[i]] + [s[i][j] for j in range(count) if j != i]) for i in range(count)]
    structure = [_extended_points(b, n + 1) for b, n in zip(branches, lengths)]

    for i in range(count):
        for j in range(i + 1, count):
            shared = s[i][j]
            for k in range(shared):
                if structure[i][k][1] != structure[j][k][1]:
                    cls = ContactBeyondBranch if shared > min(essential[i], essential[j]) else InconsistentContact
                    raise cls(
                        f"branches {i} and {j} cannot share {shared} points: "
                        f"point {k + 1} is {'satellite' if len(structure[i][k][1]) > 1 else 'free'} on one "
                        f"and {'satellite' if len(structure[j][k][1]) > 1 else 'free'} on the other"
                    )
            nxt_i, nxt_j = structure[i][shared][1], structure[j][shared][1]
            if nxt_i == nxt_j and len(nxt_i) > 1:
                raise InconsistentContact(
                    f"branches {i} and {j} both continue through the same satellite point "
                    f"after {shared} shared points"
                )

    points: List[ClusterPoint] = []
    global_of: List[List[int]] = [[] for _ in range(count)]
    for k in range(max(lengths)):
        alive = [i for i in range(count) if lengths[i] > k]
        assigned: Dict[int, int] = {}
        for i in alive:
            if i in assigned:
                continue
            p = len(points)
            members = [j for j in alive if j == i or s[i][j] > k]
            local_prox = structure[i][k][1]
            pt = ClusterPoint(
                parent=global_of[i][local_prox[0]] if local_prox else None,
                proximate_to=tuple(global_of[i][q] for q in local_prox),
                depth=k,
            )
            for j in members:
                assigned[j] = p
                pt.multiplicities[j] = structure[j][k][0]
            points.append(pt)
        for i in alive:
            global_of[i].append(assigned[i])
    return Cluster(points, global_of, [b.factor for b in branches])


def proximity_matrix(c: Cluster) -> List[List[int]]:
    """Identity minus the proximity relation: ``P[j][k] = -1`` if point k is proximate to point j."""
    n = len(c.points)
    p = [[int(i == j) for j in range(n)] for i in range(n)]
    for k, pt in enumerate(c.points):
        for j in pt.proximate_to:
            p[j][k] = -1
    return p


def cluster_intersection_matrix(c: Cluster) -> List[List[int]]:
    """Intersection matrix of the strict transforms of the exceptional curves: ``-P P^T``."""
    p = proximity_matrix(c)
    n = len(p)
    return [[-sum(p[i][k] * p[j][k] for k in range(n)) for j in range(n)] for i in range(n)]


def cluster_numerical_data(c: Cluster) -> Tuple[List[int], List[int]]:
    """(N, nu) of each exceptional curve by the blow-up recursion over proximities."""
    N: List[int] = []
    nu: List[int] = []
    for k, pt in enumerate(c.points):
        N.append(c.weighted_multiplicity(k) + sum(N[j] for j in pt.proximate_to))
        nu.append(2 + sum(nu[j] - 1 for j in pt.proximate_to))
    return N, nu


def cluster_to_graph(c: Cluster, check: bool = True) -> PlumbingGraph:
    m = cluster_intersection_matrix(c)
    n = len(m)
    ids = [f"E{k + 1}" for k in range(n)]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if m[i][j] not in (0, 1):
                raise NonMinimal(f"curves {ids[i]} and {ids[j]} meet with multiplicity {m[i][j]}")
            if m[i][j] == 1:
                edges.append((ids[i], ids[j]))
    arrows = [Arrow(ids[pts[-1]], factor) for pts, factor in zip(c.branch_points, c.factors)]
    g = PlumbingGraph(tuple(Vertex(ids[k], m[k][k]) for k in range(n)), tuple(edges), tuple(arrows))
    if check:
        report = validate(g)
        if not report.ok:
            raise NonMinimal(f"built graph is invalid: {report.violations[0][1]}")
        minimal = check_minimality(edge_decorations(g))
        if not minimal.ok:
            raise NonMinimal(f"built graph is not minimal: {minimal.violations[0][1]}")
    return g


def resolve(branches: Sequence[BranchSpec], contact: ContactSpec = ContactSpec()) -> PlumbingGraph:
    return cluster_to_graph(build_cluster(branches, contact))


def branches_from_dict(data: Mapping) -> Tuple[List[BranchSpec], ContactSpec]:
    """Decode ``{"branches": [{"m":..,"beta":[..],"factor":..}], "contacts": [...]}``.

    Contacts are objects ``{"i": 0, "j": 1, "shared_points": 2}`` or triples
    ``[0, 1, 2]``; branch indices are 0-based.
    """
    if not isinstance(data, Mapping) or not isinstance(data.get("branches"), list):
        raise ParseError("'branches' must be a list")
    branches = []
    for k, raw in enumerate(data["branches"]):
        if not isinstance(raw, Mapping) or "m" not in raw:
            raise ParseError(f"branches[{k}]: expected an object with field 'm'")
        beta = raw.get("beta", [])
        if not isinstance(beta, list):
            raise ParseError(f"branches[{k}]: 'beta' must be a list")
        branches.append(BranchSpec(raw["m"], tuple(beta), raw.get("factor", 1)))
    pairs = []
    raw_contacts = data.get("contacts", [])
    if not isinstance(raw_contacts, list):
        raise ParseError("'contacts' must be a list")
    for k, raw in enumerate(raw_contacts):
        if isinstance(raw, Mapping):
            try:
                pairs.append((raw["i"], raw["j"], raw["shared_points"]))
            except KeyError as exc:
                raise ParseError(f"contacts[{k}]: missing field {exc}") from exc
        elif isinstance(raw, list) and len(raw) == 3:
            pairs.append(tuple(raw))
        else:
            raise ParseError(f"contacts[{k}]: expected an object or a triple")
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in pairs[-1]):
            raise ParseError(f"contacts[{k}]: entries must be integers")
    return branches, ContactSpec(tuple(pairs))


def branches_to_dict(branches: Sequence[BranchSpec], contact: ContactSpec) -> dict:
    return {"branches": [b.to_dict() for b in branches], "contacts": contact.to_list()}


def parse_branches(text: str) -> Tuple[List[BranchSpec], ContactSpec]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return branches_from_dict(data)
