"""Orientable and q-orientable divisors, and integral break divisors.

The set function ``chi(S, D) = deg(D|S) + |S| - e(S)`` is submodular, and
a divisor of degree g-1 comes from an orientation exactly when chi is
nonnegative on every nonempty vertex set.  The canonical representatives
are found by repeatedly firing the complement of an extremal minimizer of
chi.  All subset searches are exhaustive over ``2**|V|`` subsets, capped
by the ``BREAKDIV_MAX_VERTICES`` environment variable (default 20).
"""

from __future__ import annotations

import enum
import os
from collections.abc import Iterable, Iterator, Mapping
from typing import NamedTuple

from .divisor import Divisor, Verdict, check_divisor, fire_set
from .errors import (
    AlreadyQOrientable,
    BreakdivError,
    NoProperSubset,
    NotOrientable,
    NotQConnected,
    SearchTooLarge,
    WrongDegree,
)
from .graph import WeightedGraph, is_spanning_tree


def max_vertices() -> int:
    return int(os.environ.get("BREAKDIV_MAX_VERTICES", "20"))


class Direction(enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


class Orientation(dict):
    """Edge id -> :class:`Direction` relative to the stored (tail, head)."""

    def head(self, g: WeightedGraph, eid: str) -> str:
        e = g.edge(eid)
        return e.head if self[eid] is Direction.FORWARD else e.tail

    def tail(self, g: WeightedGraph, eid: str) -> str:
        e = g.edge(eid)
        return e.tail if self[eid] is Direction.FORWARD else e.head

    @classmethod
    def toward(cls, g: WeightedGraph, heads: Mapping[str, str]) -> Orientation:
        """Build an orientation from a map edge id -> head vertex."""
        out = cls()
        for e in g.edges:
            h = heads[e.id]
            if h not in e.ends:
                raise BreakdivError(f"{h!r} is not an end of edge {e.id!r}")
            out[e.id] = Direction.FORWARD if h == e.head else Direction.BACKWARD
        return out

    def to_json(self) -> dict[str, str]:
        return {k: v.value for k, v in self.items()}

    @classmethod
    def from_json(cls, g: WeightedGraph, raw: Mapping[str, str]) -> Orientation:
        out = cls()
        for e in g.edges:
            try:
                out[e.id] = Direction(raw[e.id])
            except (KeyError, ValueError) as exc:
                raise BreakdivError(f"bad or missing direction for edge {e.id!r}") from exc
        return out


class DegreeMismatch(NamedTuple):
    degree: int
    expected: int


class MinimizerReport(NamedTuple):
    value: int
    witness: frozenset
    kind: str  # "minimal" or "maximal_avoiding_q"


class BreakPair(NamedTuple):
    point: object  # vertex id, or a metric point
    edge: str
    end: str  # "tail" or "head": the end of ``edge`` at which ``point`` sits


class BreakSet(tuple):
    """g pairs (point, incident edge) whose small shifted cuts leave a tree."""

    def divisor(self) -> Divisor:
        return Divisor((p.point, 1) for p in self)

    def is_valid(self, g: WeightedGraph) -> bool:
        if len(self) != g.genus:
            return False
        cut = [p.edge for p in self]
        if len(set(cut)) != len(cut):
            return False
        for p in self:
            e = g.edge(p.edge)
            if getattr(e, p.end) != p.point:
                return False
        return is_spanning_tree(g, [e.id for e in g.edges if e.id not in set(cut)])

    def to_json(self) -> list[dict]:
        return [{"point": p.point, "edge": p.edge, "end": p.end} for p in self]


# -- the chi table ---------------------------------------------------------


class _ChiTable:
    """chi(S, d) for every vertex subset S, indexed by bitmask."""

    def __init__(self, g: WeightedGraph, d: Divisor):
        n = len(g.vertices)
        if n > max_vertices():
            raise SearchTooLarge(
                f"{n} vertices exceeds BREAKDIV_MAX_VERTICES={max_vertices()}"
            )
        self.g = g
        self.n = n
        idx = {v: i for i, v in enumerate(g.vertices)}
        nbrs: list[dict[int, int]] = [{} for _ in range(n)]
        for e in g.edges:
            a, b = idx[e.tail], idx[e.head]
            nbrs[a][b] = nbrs[a].get(b, 0) + 1
            nbrs[b][a] = nbrs[b].get(a, 0) + 1
        coeff = [d[v] for v in g.vertices]
        table = [0] * (1 << n)
        for mask in range(1, 1 << n):
            low = mask & -mask
            i = low.bit_length() - 1
            rest = mask ^ low
            inner = sum(m for j, m in nbrs[i].items() if rest >> j & 1)
            table[mask] = table[rest] + coeff[i] + 1 - inner
        self.table = table
        self.full = (1 << n) - 1

    def to_set(self, mask: int) -> frozenset:
        return frozenset(v for i, v in enumerate(self.g.vertices) if mask >> i & 1)

    def bit(self, v: str) -> int:
        return 1 << self.g.vertex_index(v)

    def proper_masks(self) -> Iterator[int]:
        return iter(range(1, self.full))

    def masks_avoiding(self, q: str) -> Iterator[int]:
        qb = self.bit(q)
        return (m for m in range(1, self.full + 1) if not m & qb)

    def minimum(self, masks: Iterable[int]) -> tuple[int | None, list[int]]:
        best, arg = None, []
        for m in masks:
            c = self.table[m]
            if best is None or c < best:
                best, arg = c, [m]
            elif c == best:
                arg.append(m)
        return best, arg


def _orientable_verdict(g: WeightedGraph, d: Divisor, table: _ChiTable) -> Verdict:
    total = table.table[table.full]
    if total != 0:
        # chi(V) = deg - (g - 1) on a connected graph
        return Verdict(False, DegreeMismatch(d.degree, d.degree - total))
    value, arg = table.minimum(table.proper_masks())
    if value is not None and value < 0:
        return Verdict(False, _minimal(table, value, arg))
    return Verdict(True, None)


def _minimal(table: _ChiTable, value: int, arg: list[int]) -> MinimizerReport:
    meet = table.full
    for m in arg:
        meet &= m
    if meet == 0 or table.table[meet] != value:
        raise BreakdivError("minimizers of chi have no common minimal element")
    return MinimizerReport(value, table.to_set(meet), "minimal")


def _maximal_avoiding(table: _ChiTable, q: str, value: int) -> MinimizerReport:
    join = 0
    for m in table.masks_avoiding(q):
        if table.table[m] == value:
            join |= m
    if join == 0 or table.table[join] != value:
        raise BreakdivError("minimizers of chi avoiding q have no common maximal element")
    return MinimizerReport(value, table.to_set(join), "maximal_avoiding_q")


# -- orientations ----------------------------------------------------------


def indegrees(g: WeightedGraph, o: Mapping[str, Direction]) -> dict[str, int]:
    o = o if isinstance(o, Orientation) else Orientation(o)
    indeg = {v: 0 for v in g.vertices}
    for e in g.edges:
        indeg[o.head(g, e.id)] += 1
    return indeg


def divisor_of_orientation(g: WeightedGraph, o: Mapping[str, Direction]) -> Divisor:
    """``sum over p of (indeg(p) - 1) (p)``."""
    return Divisor({v: k - 1 for v, k in indegrees(g, o).items()})


def is_q_connected(g: WeightedGraph, o: Mapping[str, Direction], q: str) -> bool:
    o = o if isinstance(o, Orientation) else Orientation(o)
    g.vertex_index(q)
    seen = {q}
    stack = [q]
    while stack:
        v = stack.pop()
        for e in g.incident(v):
            if o.tail(g, e.id) == v:
                w = o.head(g, e.id)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return len(seen) == len(g.vertices)


def realize_orientation(g: WeightedGraph, d: Mapping) -> Orientation:
    """An orientation whose divisor is ``d``.

    Each edge is assigned a head so that vertex ``p`` receives exactly
    ``d(p) + 1`` edges; this is a bipartite b-matching solved by augmenting
    paths, edges taken in graph order and heads tried before tails.
    """
    d = check_divisor(g, d)
    cap = {v: d[v] + 1 for v in g.vertices}
    if any(c < 0 for c in cap.values()) or sum(cap.values()) != len(g.edges):
        raise NotOrientable(f"{d!r} is not orientable")
    load: dict[str, list] = {v: [] for v in g.vertices}
    head: dict[str, str] = {}

    def place(e, p, visited):
        if p in visited:
            return False
        visited.add(p)
        if len(load[p]) < cap[p]:
            load[p].append(e)
            head[e.id] = p
            return True
        for e2 in list(load[p]):
            if place(e2, e2.other(p), visited):
                load[p].remove(e2)
                load[p].append(e)
                head[e.id] = p
                return True
        return False

    for e in g.edges:
        visited: set = set()
        if not (place(e, e.head, visited) or place(e, e.tail, visited)):
            raise NotOrientable(f"{d!r} is not orientable")
    return Orientation.toward(g, head)


def is_orientable(g: WeightedGraph, d: Mapping) -> Verdict:
    """Hakimi's criterion: chi(V, d) = 0 and chi(S, d) >= 0 for all S.

    The witness is a realizing :class:`Orientation` on success, and a
    :class:`DegreeMismatch` or the minimal chi-minimizer on failure.
    """
    d = check_divisor(g, d)
    verdict = _orientable_verdict(g, d, _ChiTable(g, d))
    if not verdict:
        return verdict
    return Verdict(True, realize_orientation(g, d))


def minimal_minimizer(g: WeightedGraph, d: Mapping) -> MinimizerReport:
    """Smallest nonempty proper vertex set minimizing chi(., d)."""
    d = check_divisor(g, d)
    if len(g.vertices) < 2:
        raise NoProperSubset("graph has no nonempty proper vertex subset")
    table = _ChiTable(g, d)
    value, arg = table.minimum(table.proper_masks())
    return _minimal(table, value, arg)


def maximal_minimizer_avoiding_q(g: WeightedGraph, d: Mapping, q: str) -> MinimizerReport:
    """Largest set avoiding ``q`` on which chi(., d) attains its minimum.

    Only defined for divisors that are orientable but not q-orientable, in
    which case that minimum is 0.
    """
    d = check_divisor(g, d)
    g.vertex_index(q)
    table = _ChiTable(g, d)
    if not _orientable_verdict(g, d, table):
        raise NotOrientable(f"{d!r} is not orientable")
    value, _ = table.minimum(table.masks_avoiding(q))
    if value is None or value > 0:
        raise AlreadyQOrientable(f"{d!r} is already {q}-orientable")
    return _maximal_avoiding(table, q, value)


def is_q_orientable(g: WeightedGraph, d: Mapping, q: str) -> Verdict:
    """Orientable, and chi(S, d) > 0 for every nonempty S avoiding ``q``.

    The witness on success is a realizing (necessarily q-connected)
    orientation; on failure it is the orientability witness or the maximal
    set avoiding ``q`` with chi = 0.
    """
    d = check_divisor(g, d)
    g.vertex_index(q)
    table = _ChiTable(g, d)
    verdict = _orientable_verdict(g, d, table)
    if not verdict:
        return verdict
    value, _ = table.minimum(table.masks_avoiding(q))
    if value is not None and value <= 0:
        return Verdict(False, _maximal_avoiding(table, q, value))
    return Verdict(True, realize_orientation(g, d))


def _check_degree(g: WeightedGraph, d: Divisor):
    expected = len(g.edges) - len(g.vertices)
    if d.degree != expected:
        raise WrongDegree(f"degree {d.degree} != g - 1 = {expected}")


def make_orientable(g: WeightedGraph, d: Mapping) -> tuple[Divisor, list[frozenset]]:
    """Equivalent orientable divisor, plus the list of fired sets."""
    d = check_divisor(g, d)
    _check_degree(g, d)
    log = []
    while True:
        table = _ChiTable(g, d)
        verdict = _orientable_verdict(g, d, table)
        if verdict:
            return d, log
        fired = frozenset(g.vertices) - verdict.witness.witness
        d = fire_set(g, d, fired)
        log.append(fired)


def make_q_orientable(g: WeightedGraph, d: Mapping, q: str) -> tuple[Divisor, list[frozenset]]:
    """The unique q-orientable divisor equivalent to ``d``.

    Phase one reaches an orientable divisor; phase two keeps firing the
    complement of the maximal chi-zero set avoiding ``q``.
    """
    g.vertex_index(q)
    d, log = make_orientable(g, d)
    while True:
        verdict = is_q_orientable(g, d, q)
        if verdict:
            return d, log
        fired = frozenset(g.vertices) - verdict.witness.witness
        d = fire_set(g, d, fired)
        log.append(fired)


def canonical_break_divisor(g: WeightedGraph, d: Mapping, q: str | None = None) -> Divisor:
    """The integral break divisor linearly equivalent to ``d`` (degree g)."""
    d = check_divisor(g, d)
    if d.degree != g.genus:
        raise WrongDegree(f"degree {d.degree} != g = {g.genus}")
    q = g.vertices[0] if q is None else q
    reduced, _ = make_q_orientable(g, d - Divisor.point(q), q)
    return reduced + Divisor.point(q)


def is_integral_break_divisor(g: WeightedGraph, d: Mapping) -> Verdict:
    """Effective, degree g, and ``d - (q)`` q-orientable for the first vertex q.

    On success the witness is a q-connected orientation realizing
    ``d - (q)``; on failure it is a negative vertex, a
    :class:`DegreeMismatch`, or the chi witness set.
    """
    d = check_divisor(g, d)
    for v in g.vertices:
        if d[v] < 0:
            return Verdict(False, v)
    if d.degree != g.genus:
        return Verdict(False, DegreeMismatch(d.degree, g.genus))
    q = g.vertices[0]
    verdict = is_q_orientable(g, d - Divisor.point(q), q)
    if verdict:
        return verdict
    w = verdict.witness
    return Verdict(False, w.witness if isinstance(w, MinimizerReport) else w)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    # descending lexicographic order
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def enumerate_integral_break_divisors(g: WeightedGraph) -> list[Divisor]:
    """All vertex-supported break divisors, first vertex heaviest first."""
    out = []
    for coeffs in _compositions(g.genus, len(g.vertices)):
        d = Divisor(zip(g.vertices, coeffs))
        if is_integral_break_divisor(g, d):
            out.append(d)
    return out


def break_set_from_orientation(g: WeightedGraph, o: Mapping[str, Direction], q: str) -> BreakSet:
    """Break every edge entering ``q`` and all but one edge entering others.

    The unbroken edges form the breadth-first tree grown from ``q`` along
    directed edges taken in graph order, so each vertex keeps the edge by
    which it is first reached and the kept edges form a spanning tree.
    """
    o = o if isinstance(o, Orientation) else Orientation(o)
    if not is_q_connected(g, o, q):
        raise NotQConnected(f"orientation is not {q}-connected")
    kept: set[str] = set()
    seen = {q}
    frontier = [q]
    while frontier:
        nxt = []
        for v in frontier:
            for e in g.incident(v):
                w = o.head(g, e.id)
                if o.tail(g, e.id) == v and w not in seen:
                    seen.add(w)
                    kept.add(e.id)
                    nxt.append(w)
        frontier = nxt
    pairs = []
    for v in g.vertices:
        for e in g.edges:
            if e.id not in kept and o.head(g, e.id) == v:
                pairs.append(BreakPair(v, e.id, "head" if e.head == v else "tail"))
    return BreakSet(pairs)
