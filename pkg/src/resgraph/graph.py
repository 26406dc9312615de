"""Plumbing graphs: data model, JSON round trip, validation and DOT export.

A plumbing graph is the dual graph of the exceptional divisor of an embedded
resolution: one vertex per exceptional curve (carrying its self-intersection
number), one edge per intersection point, and one *arrow* per analytic branch
of the strict transform, attached to the exceptional curve it meets.

JSON format (keys in this order when written)::

    {"vertices": [{"id": "E1", "euler": -3}, ...],
     "edges": [["E1", "E3"], ...],
     "arrows": [{"vertex": "E5", "multiplicity": 1}, ...]}

Row and column order of :func:`intersection_matrix` is vertex declaration
order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .errors import DanglingEdge, DuplicateId, ParseError


@dataclass(frozen=True)
class Vertex:
    id: str
    euler: int


@dataclass(frozen=True)
class Arrow:
    vertex: str
    multiplicity: int = 1


@dataclass(frozen=True)
class PlumbingGraph:
    vertices: Tuple[Vertex, ...]
    edges: Tuple[Tuple[str, str], ...]
    arrows: Tuple[Arrow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "arrows", tuple(self.arrows))

    @cached_property
    def ids(self) -> Tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    @cached_property
    def index(self) -> Dict[str, int]:
        return {vid: k for k, vid in enumerate(self.ids)}

    @cached_property
    def euler(self) -> Dict[str, int]:
        return {v.id: v.euler for v in self.vertices}

    @cached_property
    def adjacency(self) -> Dict[str, Tuple[str, ...]]:
        """Exceptional neighbours of each vertex, sorted by declaration order."""
        adj: Dict[str, List[str]] = {vid: [] for vid in self.ids}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        idx = self.index
        return {vid: tuple(sorted(ns, key=idx.__getitem__)) for vid, ns in adj.items()}

    @cached_property
    def arrows_at(self) -> Dict[str, Tuple[int, ...]]:
        """Indices into :attr:`arrows` of the arrows attached to each vertex."""
        out: Dict[str, List[int]] = {vid: [] for vid in self.ids}
        for k, arrow in enumerate(self.arrows):
            out[arrow.vertex].append(k)
        return {vid: tuple(ks) for vid, ks in out.items()}

    def valency(self, vid: str) -> int:
        """Valency in the exceptional part of the graph (arrows excluded)."""
        return len(self.adjacency[vid])

    def full_valency(self, vid: str) -> int:
        """Valency in the full graph, arrows included."""
        return len(self.adjacency[vid]) + len(self.arrows_at[vid])

    def is_adjacent(self, a: str, b: str) -> bool:
        return b in self.adjacency.get(a, ())

    def branch(self, v: str, w: str) -> List[str]:
        """Vertices of the component of the graph minus ``v`` that contains ``w``.

        ``w`` must be a neighbour of ``v``. Returned in DFS preorder from ``w``.
        """
        adj = self.adjacency
        out = [w]
        stack = [(w, v)]
        while stack:
            u, parent = stack.pop()
            for x in adj[u]:
                if x != parent:
                    out.append(x)
                    stack.append((x, u))
        return out

    def path(self, a: str, b: str) -> List[str]:
        """The unique path from ``a`` to ``b`` (inclusive) in the tree."""
        if a == b:
            return [a]
        adj = self.adjacency
        parent: Dict[str, Optional[str]] = {a: None}
        stack = [a]
        while stack:
            u = stack.pop()
            if u == b:
                break
            for x in adj[u]:
                if x not in parent:
                    parent[x] = u
                    stack.append(x)
        if b not in parent:
            raise ValueError(f"no path from {a} to {b}")
        out = [b]
        while out[-1] != a:
            out.append(parent[out[-1]])
        return out[::-1]

    def subgraph_det(self, v: str, w: str) -> int:
        """Determinant of the intersection matrix of :meth:`branch` ``(v, w)``."""
        return linalg.tree_det(self.euler, self.adjacency, w, v)

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": v.id, "euler": v.euler} for v in self.vertices],
            "edges": [list(e) for e in self.edges],
            "arrows": [{"vertex": a.vertex, "multiplicity": a.multiplicity} for a in self.arrows],
        }

    def to_json(self, indent: Optional[int] = None) -> str:
        if indent is None:
            return json.dumps(self.to_dict(), separators=(",", ":"))
        return json.dumps(self.to_dict(), indent=indent)


@dataclass
class ValidationReport:
    violations: List[Tuple[str, str, Tuple[str, ...]]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule: str, detail: str, ids: Iterable[str] = ()) -> None:
        self.violations.append((rule, detail, tuple(ids)))

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"rule": rule, "detail": detail, "ids": list(ids)}
                for rule, detail, ids in self.violations
            ],
        }


def _int_field(obj: Mapping, key: str, where: str) -> int:
    if key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: field {key!r} must be an integer, got {value!r}")
    return value


def graph_from_dict(data: Mapping) -> PlumbingGraph:
    """Build a graph from decoded JSON, checking structure only."""
    if not isinstance(data, Mapping):
        raise ParseError("top level must be a JSON object")
    raw_vertices = data.get("vertices")
    if not isinstance(raw_vertices, list) or not raw_vertices:
        raise ParseError("'vertices' must be a non-empty list")
    vertices = []
    seen = set()
    for k, raw in enumerate(raw_vertices):
        where = f"vertices[{k}]"
        if not isinstance(raw, Mapping):
            raise ParseError(f"{where}: expected an object")
        vid = raw.get("id")
        if not isinstance(vid, str) or not vid:
            raise ParseError(f"{where}: 'id' must be a non-empty string")
        if vid in seen:
            raise DuplicateId(f"{where}: duplicate vertex id {vid!r}")
        seen.add(vid)
        vertices.append(Vertex(vid, _int_field(raw, "euler", where)))

    raw_edges = data.get("edges", [])
    if not isinstance(raw_edges, list):
        raise ParseError("'edges' must be a list")
    edges = []
    edge_set = set()
    for k, raw in enumerate(raw_edges):
        where = f"edges[{k}]"
        if not (isinstance(raw, list) and len(raw) == 2 and all(isinstance(x, str) for x in raw)):
            raise ParseError(f"{where}: expected a pair of vertex ids")
        a, b = raw
        for x in (a, b):
            if x not in seen:
                raise DanglingEdge(f"{where}: unknown vertex {x!r}")
        if a == b:
            raise ParseError(f"{where}: self-loop at {a!r}")
        key = frozenset((a, b))
        if key in edge_set:
            raise ParseError(f"{where}: repeated edge {a}-{b}")
        edge_set.add(key)
        edges.append((a, b))

    raw_arrows = data.get("arrows", [])
    if not isinstance(raw_arrows, list):
        raise ParseError("'arrows' must be a list")
    arrows = []
    for k, raw in enumerate(raw_arrows):
        where = f"arrows[{k}]"
        if not isinstance(raw, Mapping):
            raise ParseError(f"{where}: expected an object")
        vid = raw.get("vertex")
        if vid not in seen:
            raise DanglingEdge(f"{where}: unknown vertex {vid!r}")
        mult = _int_field(raw, "multiplicity", where) if "multiplicity" in raw else 1
        arrows.append(Arrow(vid, mult))
    return PlumbingGraph(tuple(vertices), tuple(edges), tuple(arrows))


def parse_graph(text: str) -> PlumbingGraph:
    """Parse the JSON graph format. Semantic checks are left to :func:`validate`."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return graph_from_dict(data)


def intersection_matrix(g: PlumbingGraph) -> linalg.IntegerMatrix:
    n = len(g.vertices)
    idx = g.index
    m = [[0] * n for _ in range(n)]
    for k, v in enumerate(g.vertices):
        m[k][k] = v.euler
    for a, b in g.edges:
        i, j = idx[a], idx[b]
        m[i][j] = m[j][i] = 1
    return m


def _is_connected(g: PlumbingGraph) -> bool:
    start = g.ids[0]
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for x in g.adjacency[u]:
            if x not in seen:
                seen.add(x)
                stack.append(x)
    return len(seen) == len(g.ids)


def validate(g: PlumbingGraph) -> ValidationReport:
    """Check the resolution-graph axioms; never raises."""
    report = ValidationReport()
    if not g.vertices:
        report.add("empty", "graph has no vertices")
        return report
    connected = _is_connected(g)
    if not connected:
        report.add("not connected", "the exceptional graph is not connected", g.ids)
    if len(g.edges) != len(g.vertices) - 1:
        if connected:
            report.add("cycle", "the exceptional graph contains a cycle", g.ids)
        else:
            report.add("not a tree", f"{len(g.vertices)} vertices but {len(g.edges)} edges")
    for v in g.vertices:
        if v.euler > -1:
            report.add("euler", f"self-intersection {v.euler} of {v.id} is not <= -1", (v.id,))
    if not g.arrows:
        report.add("no arrows", "the strict transform must have at least one branch")
    for k, a in enumerate(g.arrows):
        if a.multiplicity < 1:
            report.add("arrow multiplicity", f"arrow {k} at {a.vertex} has multiplicity {a.multiplicity}", (a.vertex,))
    m = intersection_matrix(g)
    if not linalg.is_negative_definite(m):
        report.add("not negative definite", "intersection matrix is not negative definite")
    d = linalg.det(m)
    if abs(d) != 1:
        report.add("determinant", f"|det| of the intersection matrix is {abs(d)}, expected 1")
    return report


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(
    g: PlumbingGraph,
    decorations: Optional[Mapping[Tuple[str, str], int]] = None,
    data: Optional[Mapping[str, Tuple[int, int]]] = None,
    arrow_data: Optional[Sequence[Tuple[int, int]]] = None,
) -> str:
    """Render ``g`` as an undirected DOT graph.

    ``decorations`` maps ``(vertex, neighbour)`` to the decoration next to
    ``vertex``; ``data`` maps vertex ids to ``(N, nu)``; ``arrow_data`` is
    aligned with ``g.arrows``. Without annotations only bare ids are shown
    (arrows show their multiplicity).
    """
    lines = ["graph resolution {", "  node [shape=circle];"]
    for v in g.vertices:
        label = v.id
        if data is not None and v.id in data:
            n, nu = data[v.id]
            label = f"{v.id}({n},{nu})"
        lines.append(f"  {_dot_quote(v.id)} [label={_dot_quote(label)}];")
    for k, a in enumerate(g.arrows):
        if arrow_data is not None:
            n, nu = arrow_data[k]
            label = f"({n},{nu})"
        else:
            label = f"({a.multiplicity})"
        lines.append(f"  {_dot_quote(f'arrow{k}')} [label={_dot_quote(label)}, shape=plaintext];")
    for a, b in g.edges:
        attrs = ""
        if decorations is not None:
            attrs = (
                f" [taillabel={_dot_quote(str(decorations[(a, b)]))},"
                f" headlabel={_dot_quote(str(decorations[(b, a)]))}]"
            )
        lines.append(f"  {_dot_quote(a)} -- {_dot_quote(b)}{attrs};")
    for k, a in enumerate(g.arrows):
        lines.append(f"  {_dot_quote(a.vertex)} -- {_dot_quote(f'arrow{k}')} [dir=forward];")
    lines.append("}")
    return "\n".join(lines) + "\n"
