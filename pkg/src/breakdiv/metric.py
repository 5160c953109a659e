"""Divisors on metric graphs and the metric canonical break divisor.

A metric graph is presented by a :class:`~breakdiv.graph.WeightedGraph`;
its points are vertices or interior points of edges.  Chips that sit in
the interior of an edge are handled through *semi-models*: a model whose
open edges each carry at most one support point, of coefficient 1.  The
finite graph ``G_D`` drops those edges, and orientability questions on the
metric graph reduce to the finite ones on ``G_D``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from . import orient
from .divisor import Divisor, Verdict
from .errors import (
    BreakdivError,
    EmptyCut,
    NotASemiModel,
    PointOffGraph,
    WrongDegree,
)
from .graph import (
    WeightedGraph,
    format_rational,
    is_spanning_tree,
    parse_rational,
    refine,
    refinement_vertex_id,
    spanning_trees,
)

MAX_FIRINGS = 10_000


@dataclass(frozen=True, order=False)
class MetricPoint:
    """A vertex, or a point at ``offset`` from the tail of ``edge``."""

    vertex: str | None = None
    edge: str | None = None
    offset: Fraction | None = None

    @classmethod
    def at(cls, vertex: str) -> MetricPoint:
        return cls(vertex=vertex)

    @classmethod
    def on(cls, g: WeightedGraph, edge: str, offset) -> MetricPoint:
        """Point on ``edge``; endpoints are normalized to vertex form."""
        e = g.edge(edge)
        t = parse_rational(offset)
        if t < 0 or t > e.length:
            raise PointOffGraph(f"offset {t} outside edge {edge!r} of length {e.length}")
        if t == 0:
            return cls(vertex=e.tail)
        if t == e.length:
            return cls(vertex=e.head)
        return cls(edge=edge, offset=t)

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def __repr__(self) -> str:
        if self.is_vertex:
            return f"({self.vertex})"
        return f"({self.edge}@{format_rational(self.offset)})"

    def label(self) -> str:
        return self.vertex if self.is_vertex else f"{self.edge}@{format_rational(self.offset)}"

    def to_json(self) -> dict:
        if self.is_vertex:
            return {"vertex": self.vertex}
        return {"edge": self.edge, "offset": format_rational(self.offset)}


class MetricDivisor(Divisor):
    """Divisor whose keys are :class:`MetricPoint` values."""

    @classmethod
    def from_vertices(cls, d: Mapping[str, int]) -> MetricDivisor:
        return cls({MetricPoint.at(v): c for v, c in d.items()})


def check_point(g: WeightedGraph, p) -> MetricPoint:
    if isinstance(p, str):
        p = MetricPoint.at(p)
    if not isinstance(p, MetricPoint):
        raise PointOffGraph(f"not a metric point: {p!r}")
    if p.is_vertex:
        if not g.has_vertex(p.vertex):
            raise PointOffGraph(f"vertex {p.vertex!r} not on graph")
        return p
    if not g.has_edge(p.edge):
        raise PointOffGraph(f"edge {p.edge!r} not on graph")
    return MetricPoint.on(g, p.edge, p.offset)


def check_metric_divisor(g: WeightedGraph, d: Mapping) -> MetricDivisor:
    out: dict = {}
    for p, c in d.items():
        p = check_point(g, p)
        out[p] = out.get(p, 0) + c
    return MetricDivisor(out)


def point_sort_key(g: WeightedGraph, p: MetricPoint):
    if p.is_vertex:
        return (0, g.vertex_index(p.vertex), Fraction(0))
    return (1, g.edge_index(p.edge), p.offset)


def sorted_points(g: WeightedGraph, points: Iterable[MetricPoint]) -> list[MetricPoint]:
    return sorted(points, key=lambda p: point_sort_key(g, p))


def metric_divisor_to_json(g: WeightedGraph, d: MetricDivisor) -> dict:
    return {
        "points": [{**p.to_json(), "coeff": d[p]} for p in sorted_points(g, d)]
    }


def metric_divisor_from_json(g: WeightedGraph, raw) -> MetricDivisor:
    if isinstance(raw, Mapping) and "points" in raw:
        out: dict = {}
        for item in raw["points"]:
            try:
                coeff = item.get("coeff", 1)
                if "vertex" in item:
                    p = MetricPoint.at(str(item["vertex"]))
                else:
                    p = MetricPoint(edge=str(item["edge"]), offset=parse_rational(item["offset"]))
            except (KeyError, TypeError, AttributeError) as exc:
                raise BreakdivError(f"malformed metric point: {item!r}") from exc
            p = check_point(g, p)
            out[p] = out.get(p, 0) + coeff
        return MetricDivisor(out)
    if isinstance(raw, Mapping):
        return check_metric_divisor(g, MetricDivisor.from_vertices(raw))
    raise BreakdivError("metric divisor must be an object")


# -- moving between a graph and its refinements ----------------------------


def to_root_point(g: WeightedGraph, p: MetricPoint) -> MetricPoint:
    """Express a point of a refinement in coordinates of the original graph."""
    p = check_point(g, p)
    if g.base is None:
        return p
    root = g.base
    if p.is_vertex:
        if p.vertex in g.vertex_origin:
            be, t = g.vertex_origin[p.vertex]
            return MetricPoint.on(root, be, t)
        return p
    seg = g.segments[p.edge]
    return MetricPoint.on(root, seg.base_edge, seg.start + p.offset)


def from_root_point(g: WeightedGraph, p: MetricPoint) -> MetricPoint:
    """Express a point of the original graph in coordinates of ``g``."""
    if g.base is None:
        return check_point(g, p)
    p = check_point(g.base, p)
    if p.is_vertex:
        return p
    for v, (be, t) in g.vertex_origin.items():
        if be == p.edge and t == p.offset:
            return MetricPoint.at(v)
    for sid, seg in g.segments.items():
        if seg.base_edge == p.edge and seg.start < p.offset < seg.end:
            return MetricPoint(edge=sid, offset=p.offset - seg.start)
    raise PointOffGraph(f"{p!r} not found on refinement")


def convert_divisor(src: WeightedGraph, dst: WeightedGraph, d: Mapping) -> MetricDivisor:
    """Re-coordinatize between two refinements of the same graph."""
    if src.root != dst.root:
        raise BreakdivError("graphs are not refinements of a common graph")
    out: dict = {}
    for p, c in d.items():
        p = from_root_point(dst, to_root_point(src, p))
        out[p] = out.get(p, 0) + c
    return MetricDivisor(out)


def model_for(
    g0: WeightedGraph, d: Mapping, q=None
) -> tuple[WeightedGraph, MetricDivisor, dict[MetricPoint, MetricPoint]]:
    """Refine ``g0`` until ``Supp(d)`` (and ``q``) consist of vertices.

    Returns the model, ``d`` in model coordinates, and the map from each
    support point (in ``g0`` coordinates) to its model vertex.
    """
    d = check_metric_divisor(g0, d)
    points = list(d)
    if q is not None:
        points.append(check_point(g0, q))
    cuts: dict[str, set] = {}
    for p in points:
        if not p.is_vertex:
            cuts.setdefault(p.edge, set()).add(p.offset)
    model = refine(g0, [(e, sorted(offs)) for e, offs in cuts.items()])
    mapping = {}
    for p in points:
        if p.is_vertex:
            mapping[p] = p
        else:
            i = sorted(cuts[p.edge]).index(p.offset) + 1
            mapping[p] = MetricPoint.at(refinement_vertex_id(p.edge, i))
    return model, MetricDivisor({mapping[p]: c for p, c in d.items()}), mapping


# -- semi-models -----------------------------------------------------------


class SemiModelView(NamedTuple):
    graph: WeightedGraph
    divisor: MetricDivisor
    g_d: WeightedGraph
    d_g: Divisor


def _interior_chips(g: WeightedGraph, d: MetricDivisor) -> dict[str, MetricPoint]:
    interior: dict[str, MetricPoint] = {}
    for p, c in d.items():
        if p.is_vertex:
            continue
        if c != 1:
            raise NotASemiModel(f"interior point {p!r} has coefficient {c}")
        if p.edge in interior:
            raise NotASemiModel(f"edge {p.edge!r} holds two support points")
        interior[p.edge] = p
    return interior


def restricted_graph(g: WeightedGraph, d: Mapping) -> SemiModelView:
    """Drop every open edge that meets the support of ``d``."""
    d = check_metric_divisor(g, d)
    interior = _interior_chips(g, d)
    g_d = g.subgraph(e.id for e in g.edges if e.id not in interior)
    d_g = Divisor({p.vertex: c for p, c in d.items() if p.is_vertex})
    return SemiModelView(g, d, g_d, d_g)


class CutFiring(NamedTuple):
    model: WeightedGraph
    toward: frozenset
    distance: Fraction
    before: MetricDivisor
    after: MetricDivisor


def metric_fire_cut(g: WeightedGraph, d: Mapping, s: Iterable[str]) -> tuple[MetricDivisor, Fraction]:
    """Move chips a common distance toward the subgraph induced by ``s``.

    Every interval leaving ``s`` runs from a vertex of ``s`` to the first
    vertex or support point beyond it.  With ``l`` the shortest such
    interval, the far end of every interval gives up one chip and the
    point at distance ``l`` from it (toward ``s``) receives one.
    """
    d = check_metric_divisor(g, d)
    s = g.check_vertices(s)
    interior = _interior_chips(g, d)
    cuts = []
    for e in g.edges:
        tail_in, head_in = e.tail in s, e.head in s
        if tail_in == head_in:
            continue
        near = e.tail if tail_in else e.head
        if e.id in interior:
            far = interior[e.id]
            span = far.offset if tail_in else e.length - far.offset
        else:
            far = MetricPoint.at(e.head if tail_in else e.tail)
            span = e.length
        cuts.append((e, near, span, far))
    if not cuts:
        raise EmptyCut("no edge leaves the given vertex set")
    step = min(span for _, _, span, _ in cuts)
    out = dict(d)
    for e, near, span, far in cuts:
        out[far] = out.get(far, 0) - 1
        from_near = span - step
        offset = from_near if near == e.tail else e.length - from_near
        land = MetricPoint.on(g, e.id, offset)
        out[land] = out.get(land, 0) + 1
    return MetricDivisor(out), step


def _settle(g: WeightedGraph, d: MetricDivisor, q: str | None, log: list) -> MetricDivisor:
    """Cut-fire on model ``g`` until orientable (q None) or q-orientable."""
    for _ in range(MAX_FIRINGS):
        view = restricted_graph(g, d)
        if q is None:
            table = orient._ChiTable(view.g_d, view.d_g)
            verdict = orient._orientable_verdict(view.g_d, view.d_g, table)
            if verdict:
                return d
            target = verdict.witness.witness
        else:
            verdict = orient.is_q_orientable(view.g_d, view.d_g, q)
            if verdict:
                return d
            if not isinstance(verdict.witness, orient.MinimizerReport):
                raise BreakdivError("divisor lost orientability while seeking q-orientability")
            target = verdict.witness.witness
        after, step = metric_fire_cut(g, d, target)
        log.append(CutFiring(g, target, step, d, after))
        d = after
    raise BreakdivError(f"no fixed point after {MAX_FIRINGS} cut firings")


def _check_metric_degree(g: WeightedGraph, d: MetricDivisor, expected: int):
    if d.degree != expected:
        raise WrongDegree(f"degree {d.degree} != {expected}")


def metric_make_orientable(g0: WeightedGraph, d: Mapping) -> tuple[MetricDivisor, list[CutFiring]]:
    """Equivalent divisor that is orientable on the metric graph.

    The result is in ``g0`` coordinates; the log records every cut firing
    in the coordinates of the working model.
    """
    d = check_metric_divisor(g0, d)
    _check_metric_degree(g0, d, g0.genus - 1)
    model, dm, _ = model_for(g0, d)
    log: list[CutFiring] = []
    out = _settle(model, dm, None, log)
    return convert_divisor(model, g0, out), log


def metric_make_q_orientable(g0: WeightedGraph, d: Mapping, q) -> tuple[MetricDivisor, list[CutFiring]]:
    """The unique q-orientable divisor equivalent to ``d``, in ``g0`` coordinates."""
    d = check_metric_divisor(g0, d)
    _check_metric_degree(g0, d, g0.genus - 1)
    q = check_point(g0, q)
    model, dm, mapping = model_for(g0, d, q)
    qv = mapping[q].vertex
    log: list[CutFiring] = []
    out = _settle(model, dm, None, log)
    out = _settle(model, out, qv, log)
    return convert_divisor(model, g0, out), log


def canonical_break_divisor_metric(g0: WeightedGraph, d: Mapping, q=None) -> MetricDivisor:
    """The unique break divisor linearly equivalent to ``d`` (degree g)."""
    d = check_metric_divisor(g0, d)
    _check_metric_degree(g0, d, g0.genus)
    q = check_point(g0, g0.vertices[0] if q is None else q)
    reduced, _ = metric_make_q_orientable(g0, d - MetricDivisor.point(q), q)
    return reduced + MetricDivisor.point(q)


# -- break divisor certificates --------------------------------------------


class BreakCertificate(NamedTuple):
    tree: tuple[str, ...]
    assignment: tuple[tuple[MetricPoint, str], ...]  # point -> non-tree edge


def _in_closure(g: WeightedGraph, p: MetricPoint, eid: str) -> bool:
    if p.is_vertex:
        return p.vertex in g.edge(eid).ends
    return p.edge == eid


def _match(points: list, edges: list, ok) -> dict[int, str] | None:
    owner: dict[str, int] = {}

    def augment(i, seen):
        for e in edges:
            if e in seen or not ok(points[i], e):
                continue
            seen.add(e)
            if e not in owner or augment(owner[e], seen):
                owner[e] = i
                return True
        return False

    for i in range(len(points)):
        if not augment(i, set()):
            return None
    return {i: e for e, i in owner.items()}


def break_certificate(g0: WeightedGraph, d: Mapping) -> BreakCertificate | None:
    """A spanning tree and a matching of points to non-tree edge closures.

    Trees are tried in enumeration order; ``None`` means ``d`` is not a
    break divisor.
    """
    d = check_metric_divisor(g0, d)
    if not d.is_effective() or d.degree != g0.genus:
        return None
    points = [p for p in sorted_points(g0, d) for _ in range(d[p])]
    for tree in spanning_trees(g0):
        others = [e.id for e in g0.edges if e.id not in tree]
        match = _match(points, others, lambda p, e: _in_closure(g0, p, e))
        if match is not None:
            return BreakCertificate(tree, tuple((points[i], match[i]) for i in range(len(points))))
    return None


def is_rigid_interior(g0: WeightedGraph, d: Mapping) -> bool:
    """True if ``d`` puts one chip inside each non-tree edge of some tree.

    Such divisors are the only members of their linear system, hence
    q-reduced for every q.
    """
    d = check_metric_divisor(g0, d)
    if not d.is_effective() or d.degree != g0.genus:
        return False
    if any(p.is_vertex or d[p] != 1 for p in d):
        return False
    used = {p.edge for p in d}
    if len(used) != len(d):
        return False
    rest = [e.id for e in g0.edges if e.id not in used]
    return is_spanning_tree(g0, rest)


def is_metric_q_orientable(g: WeightedGraph, d: Mapping, q: str) -> Verdict:
    """q-orientability of a semi-model divisor, decided on ``G_D``."""
    view = restricted_graph(g, d)
    return orient.is_q_orientable(view.g_d, view.d_g, q)


def is_metric_orientable(g: WeightedGraph, d: Mapping) -> bool:
    view = restricted_graph(g, d)
    if view.d_g.degree != len(view.g_d.edges) - len(view.g_d.vertices):
        return False
    return bool(orient.is_orientable(view.g_d, view.d_g))
