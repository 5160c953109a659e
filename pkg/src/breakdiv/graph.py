"""Weighted multigraphs, refinements, spanning trees and fundamental cycles.

A :class:`WeightedGraph` is a loopless multigraph with exact positive
rational edge lengths.  Each edge stores its endpoints in a fixed order
(tail, head); that order is the reference orientation used by every chain,
cycle and orientation in the package.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    DisconnectedGraph,
    DuplicateId,
    EdgeInTree,
    LoopEdge,
    NonPositiveLength,
    OffsetOutOfRange,
    OverlappingSets,
    UnknownEdge,
    UnknownVertex,
    BreakdivError,
)

Rational = Fraction
VertexSet = frozenset
SpanningTree = tuple  # edge ids in graph order
CycleVector = dict  # edge id -> integer coefficient


def parse_rational(value) -> Fraction:
    """Parse ``"p"``, ``"p/q"`` or an ``int`` into a Fraction.

    Floats and decimal strings are rejected so that no rounding ever
    enters the computation.
    """
    if isinstance(value, bool):
        raise BreakdivError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip()
        if any(c in text for c in ".eE"):
            raise BreakdivError(f"decimal notation not allowed: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise BreakdivError(f"not a rational: {value!r}") from exc
    raise BreakdivError(f"not a rational: {value!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    length: Fraction

    @property
    def ends(self) -> tuple[str, str]:
        return (self.tail, self.head)

    def other(self, v: str) -> str:
        if v == self.tail:
            return self.head
        if v == self.head:
            return self.tail
        raise UnknownVertex(f"{v!r} is not an end of edge {self.id!r}")


@dataclass(frozen=True)
class Segment:
    """Where a refined edge sits inside an edge of the base graph.

    The segment runs from ``start`` to ``end`` (offsets measured from the
    base edge's tail) and is oriented the same way as the base edge.
    """

    base_edge: str
    start: Fraction
    end: Fraction


@dataclass(frozen=True)
class WeightedGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    # Refinement provenance; ``base`` is None for an unrefined graph.
    base: WeightedGraph | None = field(default=None, compare=False, repr=False)
    segments: Mapping[str, Segment] = field(default_factory=dict, compare=False, repr=False)
    vertex_origin: Mapping[str, tuple[str, Fraction]] = field(
        default_factory=dict, compare=False, repr=False
    )
    require_connected: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        index = {}
        for v in self.vertices:
            if v in index:
                raise DuplicateId(f"duplicate vertex id {v!r}")
            index[v] = len(index)
        edge_map = {}
        incident = {v: [] for v in self.vertices}
        for e in self.edges:
            if e.id in edge_map:
                raise DuplicateId(f"duplicate edge id {e.id!r}")
            for end in e.ends:
                if end not in index:
                    raise UnknownVertex(f"edge {e.id!r} references unknown vertex {end!r}")
            if e.tail == e.head:
                raise LoopEdge(f"edge {e.id!r} is a loop at {e.tail!r}; subdivide it first")
            if e.length <= 0:
                raise NonPositiveLength(f"edge {e.id!r} has length {e.length}")
            edge_map[e.id] = e
            incident[e.tail].append(e)
            incident[e.head].append(e)
        object.__setattr__(self, "_vindex", index)
        object.__setattr__(self, "_edges", edge_map)
        object.__setattr__(self, "_eindex", {e.id: i for i, e in enumerate(self.edges)})
        object.__setattr__(self, "_incident", {v: tuple(es) for v, es in incident.items()})
        if self.require_connected and len(_components(self.vertices, self.edges)) > 1:
            raise DisconnectedGraph("graph is not connected")

    # -- lookups ---------------------------------------------------------

    def edge(self, eid: str) -> Edge:
        try:
            return self._edges[eid]
        except KeyError:
            raise UnknownEdge(f"unknown edge {eid!r}") from None

    def has_vertex(self, v) -> bool:
        return v in self._vindex

    def has_edge(self, eid) -> bool:
        return eid in self._edges

    def vertex_index(self, v: str) -> int:
        try:
            return self._vindex[v]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v!r}") from None

    def edge_index(self, eid: str) -> int:
        self.edge(eid)
        return self._eindex[eid]

    def incident(self, v: str) -> tuple[Edge, ...]:
        self.vertex_index(v)
        return self._incident[v]

    def degree(self, v: str) -> int:
        return len(self.incident(v))

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    @property
    def genus(self) -> int:
        return len(self.edges) - len(self.vertices) + len(_components(self.vertices, self.edges))

    @property
    def total_length(self) -> Fraction:
        return sum((e.length for e in self.edges), Fraction(0))

    @property
    def root(self) -> WeightedGraph:
        return self.base if self.base is not None else self

    def check_vertices(self, vs: Iterable[str]) -> frozenset:
        vs = frozenset(vs)
        for v in vs:
            self.vertex_index(v)
        return vs

    def sorted_vertices(self, vs: Iterable[str]) -> list[str]:
        return sorted(vs, key=self.vertex_index)

    def sorted_edges(self, es: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(es, key=self.edge_index))

    def subgraph(self, edge_ids: Iterable[str]) -> WeightedGraph:
        """Spanning subgraph on all vertices; may be disconnected."""
        keep = set(edge_ids)
        return WeightedGraph(
            self.vertices,
            [e for e in self.edges if e.id in keep],
            require_connected=False,
        )

    def with_unit_lengths(self) -> WeightedGraph:
        return WeightedGraph(
            self.vertices,
            [Edge(e.id, e.tail, e.head, Fraction(1)) for e in self.edges],
            require_connected=self.require_connected,
        )


def _components(vertices: Sequence[str], edges: Iterable[Edge]) -> list[set]:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        a, b = find(e.tail), find(e.head)
        if a != b:
            parent[a] = b
    groups: dict[str, set] = {}
    for v in vertices:
        groups.setdefault(find(v), set()).add(v)
    return list(groups.values())


def components(g: WeightedGraph) -> list[frozenset]:
    """Connected components, each a vertex set, ordered by first vertex."""
    comps = [frozenset(c) for c in _components(g.vertices, g.edges)]
    return sorted(comps, key=lambda c: min(g.vertex_index(v) for v in c))


# -- ingestion -------------------------------------------------------------


def validate_graph(raw: Mapping) -> WeightedGraph:
    """Build a graph from its JSON description.

    ``raw`` has the shape ``{"vertices": [...], "edges": [{"id", "ends",
    "length"}, ...]}``.  Vertex and edge order are preserved.
    """
    if not isinstance(raw, Mapping):
        raise BreakdivError("graph description must be an object")
    try:
        vertices = [str(v) for v in raw["vertices"]]
        edges = []
        for item in raw.get("edges", []):
            ends = item["ends"]
            if len(ends) != 2:
                raise BreakdivError(f"edge {item.get('id')!r} must have two ends")
            edges.append(
                Edge(str(item["id"]), str(ends[0]), str(ends[1]), parse_rational(item["length"]))
            )
    except (KeyError, TypeError) as exc:
        raise BreakdivError(f"malformed graph description: {exc}") from exc
    return WeightedGraph(vertices, edges)


def graph_to_json(g: WeightedGraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [
            {"id": e.id, "ends": [e.tail, e.head], "length": format_rational(e.length)}
            for e in g.edges
        ],
    }


# -- refinement ------------------------------------------------------------


def refinement_vertex_id(eid: str, index: int) -> str:
    return f"{eid}@{index}"


def refinement_edge_id(eid: str, index: int) -> str:
    return f"{eid}.{index}"


def _segment(g: WeightedGraph, eid: str) -> Segment:
    if g.base is None:
        return Segment(eid, Fraction(0), g.edge(eid).length)
    return g.segments[eid]


def refine(g: WeightedGraph, spec: Iterable[tuple[str, Sequence]]) -> WeightedGraph:
    """Subdivide edges at interior offsets, preserving total length.

    ``spec`` lists ``(edge id, offsets)`` with offsets measured from the
    edge's tail.  Edge ``e`` split at k offsets becomes segments
    ``e.1 .. e.(k+1)`` joined through new vertices ``e@1 .. e@k``.
    Refining a refinement keeps provenance relative to the original graph.
    """
    cuts: dict[str, list[Fraction]] = {}
    for eid, offsets in spec:
        e = g.edge(eid)
        offs = [parse_rational(o) for o in offsets]
        if eid in cuts:
            raise DuplicateId(f"edge {eid!r} listed twice in refinement")
        for a, b in zip(offs, offs[1:]):
            if not a < b:
                raise OffsetOutOfRange(f"offsets on {eid!r} must be strictly increasing")
        for o in offs:
            if not 0 < o < e.length:
                raise OffsetOutOfRange(f"offset {o} not strictly inside edge {eid!r}")
        if offs:
            cuts[eid] = offs

    base = g.root
    vertices = list(g.vertices)
    vertex_origin = dict(g.vertex_origin)
    segments = {}
    edges = []
    for e in g.edges:
        seg = _segment(g, e.id)
        offs = cuts.get(e.id)
        if not offs:
            edges.append(e)
            segments[e.id] = seg
            continue
        # position inside the base edge grows along this edge iff the segment
        # is traversed tail->head, which refine always preserves
        points = [Fraction(0), *offs, e.length]
        names = [e.tail]
        for i, o in enumerate(offs, 1):
            vid = refinement_vertex_id(e.id, i)
            names.append(vid)
            vertices.append(vid)
            vertex_origin[vid] = (seg.base_edge, seg.start + o)
        names.append(e.head)
        for i in range(len(points) - 1):
            sid = refinement_edge_id(e.id, i + 1)
            edges.append(Edge(sid, names[i], names[i + 1], points[i + 1] - points[i]))
            segments[sid] = Segment(seg.base_edge, seg.start + points[i], seg.start + points[i + 1])
    return WeightedGraph(
        vertices, edges, base=base, segments=segments, vertex_origin=vertex_origin
    )


def unit_refinement(g: WeightedGraph) -> WeightedGraph:
    """Split every integer-length edge into unit segments."""
    spec = []
    for e in g.edges:
        if e.length.denominator != 1:
            raise BreakdivError(f"edge {e.id!r} has non-integer length {e.length}")
        n = e.length.numerator
        if n > 1:
            spec.append((e.id, [Fraction(i) for i in range(1, n)]))
    return refine(g, spec)


# -- spanning trees --------------------------------------------------------


def is_spanning_tree(g: WeightedGraph, edge_ids: Iterable[str]) -> bool:
    eids = list(edge_ids)
    if len(set(eids)) != len(eids) or len(eids) != len(g.vertices) - 1:
        return False
    return len(_components(g.vertices, [g.edge(e) for e in eids])) == 1


def spanning_trees(g: WeightedGraph) -> list[SpanningTree]:
    """All spanning trees in lexicographic order of edge positions.

    Each edge is first contracted (kept) and then deleted, which yields
    the lexicographic order directly.
    """
    n = len(g.vertices)
    edges = g.edges
    m = len(edges)
    vid = {v: i for i, v in enumerate(g.vertices)}
    ends = [(vid[e.tail], vid[e.head]) for e in edges]
    out: list[SpanningTree] = []

    def find(parent, x):
        while parent[x] != x:
            x = parent[x]
        return x

    def spannable(parent, start):
        # can edges[start:] join every current component?
        p = list(parent)
        comps = sum(1 for i in range(n) if find(p, i) == i)
        for j in range(start, m):
            a, b = find(p, ends[j][0]), find(p, ends[j][1])
            if a != b:
                p[a] = b
                comps -= 1
        return comps == 1

    def rec(i, parent, chosen):
        if len(chosen) == n - 1:
            out.append(tuple(edges[j].id for j in chosen))
            return
        if i == m or m - i < n - 1 - len(chosen):
            return
        a, b = find(parent, ends[i][0]), find(parent, ends[i][1])
        if a != b:
            p = list(parent)
            p[a] = b
            rec(i + 1, p, chosen + [i])
        if spannable(parent, i + 1):
            rec(i + 1, parent, chosen)

    if n == 0:
        return out
    rec(0, list(range(n)), [])
    return out


# -- cuts ------------------------------------------------------------------


def cut_count(g: WeightedGraph, s: Iterable[str], t: Iterable[str]) -> int:
    """Number of edges with one end in ``s`` and the other in ``t``."""
    s, t = g.check_vertices(s), g.check_vertices(t)
    if s & t:
        raise OverlappingSets("vertex sets must be disjoint")
    return sum(
        1 for e in g.edges if (e.tail in s and e.head in t) or (e.tail in t and e.head in s)
    )


def internal_edge_count(g: WeightedGraph, s: Iterable[str]) -> int:
    """Number of edges with both ends in ``s``."""
    s = g.check_vertices(s)
    return sum(1 for e in g.edges if e.tail in s and e.head in s)


def complement(g: WeightedGraph, s: Iterable[str]) -> frozenset:
    return frozenset(g.vertices) - g.check_vertices(s)


# -- chains and cycles -----------------------------------------------------


def boundary(g: WeightedGraph, chain: Mapping[str, object]) -> dict[str, object]:
    """Boundary of a 1-chain: head minus tail, accumulated per vertex."""
    out: dict[str, object] = {v: 0 for v in g.vertices}
    for eid, c in chain.items():
        e = g.edge(eid)
        out[e.head] += c
        out[e.tail] -= c
    return out


def tree_path(g: WeightedGraph, tree: Iterable[str], a: str, b: str) -> dict[str, int]:
    """The unique path from ``a`` to ``b`` inside ``tree`` as a signed chain."""
    tree = set(tree)
    g.vertex_index(a)
    g.vertex_index(b)
    prev: dict[str, tuple[str, int] | None] = {a: None}
    stack = [a]
    while stack:
        v = stack.pop()
        if v == b:
            break
        for e in g.incident(v):
            if e.id not in tree:
                continue
            w = e.other(v)
            if w not in prev:
                prev[w] = (e.id, 1 if e.tail == v else -1)
                stack.append(w)
    if b not in prev:
        raise BreakdivError(f"{b!r} not reachable from {a!r} inside the tree")
    chain: dict[str, int] = {}
    v = b
    while prev[v] is not None:
        eid, sign = prev[v]
        chain[eid] = sign
        v = g.edge(eid).other(v)
    return chain


def fundamental_cycle(g: WeightedGraph, t: Iterable[str], e: str) -> CycleVector:
    """Unique cycle in ``t + e``, with coefficient +1 on ``e``.

    The cycle runs along ``e`` from tail to head and returns to the tail
    through the tree.
    """
    t = tuple(t)
    edge = g.edge(e)
    if e in t:
        raise EdgeInTree(f"edge {e!r} belongs to the tree")
    cycle = {e: 1}
    cycle.update(tree_path(g, t, edge.head, edge.tail))
    return cycle


def non_tree_edges(g: WeightedGraph, t: Iterable[str]) -> tuple[str, ...]:
    t = set(t)
    return tuple(e.id for e in g.edges if e.id not in t)


def fundamental_cycles(g: WeightedGraph, t: Iterable[str]) -> list[CycleVector]:
    t = tuple(t)
    return [fundamental_cycle(g, t, e) for e in non_tree_edges(g, t)]
