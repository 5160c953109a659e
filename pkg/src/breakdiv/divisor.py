"""Divisors on finite graphs: chi, Laplacian, set firing and q-reduction.

The finite-graph Laplacian uses unit conductance on every edge; edge
lengths only matter for the homology and metric modules.  The sign
convention is ``laplacian(f)(p) = sum over edges pq of f(q) - f(p)``, so
firing a set ``X`` (every vertex of ``X`` sends one chip along each edge
leaving ``X``) is ``d + laplacian(indicator of X)``.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Iterator, Mapping
from typing import NamedTuple

from .errors import UnknownVertex
from .graph import WeightedGraph, cut_count, internal_edge_count


class Divisor(Mapping):
    """Immutable finitely supported integer combination of points.

    Keys are vertex ids for finite-graph divisors and
    :class:`~breakdiv.metric.MetricPoint` values for metric divisors.
    Looking up a point outside the support returns 0.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping | Iterable = (), /):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict = {}
        for k, v in items:
            if isinstance(v, bool) or int(v) != v:
                raise ValueError(f"coefficient of {k!r} must be an integer, got {v!r}")
            c[k] = c.get(k, 0) + int(v)
        self._c = {k: v for k, v in c.items() if v}
        self._hash = None

    @classmethod
    def point(cls, p: Hashable, coeff: int = 1) -> Divisor:
        return cls({p: coeff})

    def __getitem__(self, p) -> int:
        return self._c.get(p, 0)

    def __contains__(self, p) -> bool:
        return p in self._c

    def __iter__(self) -> Iterator:
        return iter(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, Divisor):
            return self._c == other._c
        if isinstance(other, Mapping):
            return self._c == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __repr__(self) -> str:
        if not self._c:
            return f"{type(self).__name__}(0)"
        return f"{type(self).__name__}({self._c!r})"

    def __add__(self, other: Mapping) -> Divisor:
        c = dict(self._c)
        for k, v in other.items():
            c[k] = c.get(k, 0) + v
        return type(self)(c)

    def __sub__(self, other: Mapping) -> Divisor:
        c = dict(self._c)
        for k, v in other.items():
            c[k] = c.get(k, 0) - v
        return type(self)(c)

    def __neg__(self) -> Divisor:
        return type(self)({k: -v for k, v in self._c.items()})

    def __mul__(self, n: int) -> Divisor:
        return type(self)({k: n * v for k, v in self._c.items()})

    __rmul__ = __mul__

    @property
    def degree(self) -> int:
        return sum(self._c.values())

    @property
    def support(self) -> frozenset:
        return frozenset(self._c)

    def restrict(self, points: Iterable) -> Divisor:
        points = set(points)
        return type(self)({k: v for k, v in self._c.items() if k in points})

    def is_effective(self, outside: Hashable | None = None) -> bool:
        return all(v >= 0 for k, v in self._c.items() if k != outside)


class Verdict(NamedTuple):
    """A predicate result together with the evidence behind it."""

    ok: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


class ChiReport(NamedTuple):
    set: frozenset
    chi: int
    divisor: Divisor


def check_divisor(g: WeightedGraph, d: Mapping) -> Divisor:
    d = d if isinstance(d, Divisor) else Divisor(d)
    for v in d:
        if not g.has_vertex(v):
            raise UnknownVertex(f"divisor references unknown vertex {v!r}")
    return d


def chi(g: WeightedGraph, s: Iterable[str], d: Mapping) -> int:
    """``deg(d restricted to s) + |s| - e(s)``."""
    s = g.check_vertices(s)
    d = check_divisor(g, d)
    return sum(d[v] for v in s) + len(s) - internal_edge_count(g, s)


def chi_report(g: WeightedGraph, s: Iterable[str], d: Mapping) -> ChiReport:
    s = g.check_vertices(s)
    return ChiReport(s, chi(g, s, d), check_divisor(g, d))


def laplacian(g: WeightedGraph, f: Mapping[str, int]) -> Divisor:
    """Unit-conductance graph Laplacian of a vertex function."""
    for v in g.vertices:
        if v not in f:
            raise UnknownVertex(f"function is not defined at {v!r}")
    out = {v: 0 for v in g.vertices}
    for e in g.edges:
        diff = f[e.head] - f[e.tail]
        out[e.tail] += diff
        out[e.head] -= diff
    return Divisor(out)


def indicator(g: WeightedGraph, x: Iterable[str]) -> dict[str, int]:
    x = g.check_vertices(x)
    return {v: int(v in x) for v in g.vertices}


def fire_set(g: WeightedGraph, d: Mapping, x: Iterable[str]) -> Divisor:
    """Every vertex of ``x`` sends one chip along each edge leaving ``x``."""
    x = g.check_vertices(x)
    c = dict(check_divisor(g, d))
    for e in g.edges:
        if (e.tail in x) != (e.head in x):
            inside, outside = (e.tail, e.head) if e.tail in x else (e.head, e.tail)
            c[inside] = c.get(inside, 0) - 1
            c[outside] = c.get(outside, 0) + 1
    return Divisor(c)


def _bfs_levels(g: WeightedGraph, q: str) -> dict[str, int]:
    level = {q: 0}
    frontier = [q]
    while frontier:
        nxt = []
        for v in frontier:
            for e in g.incident(v):
                w = e.other(v)
                if w not in level:
                    level[w] = level[v] + 1
                    nxt.append(w)
        frontier = nxt
    return level


def _burn(g: WeightedGraph, d: Divisor, q: str) -> frozenset:
    """Dhar's burning process from ``q``; returns the unburnt set."""
    burnt = {q}
    threat = {v: 0 for v in g.vertices}
    stack = [q]
    while stack:
        v = stack.pop()
        for e in g.incident(v):
            w = e.other(v)
            if w in burnt:
                continue
            threat[w] += 1
            if threat[w] > d[w]:
                burnt.add(w)
                stack.append(w)
    return frozenset(g.vertices) - burnt


def dhar_reduce(g: WeightedGraph, d: Mapping, q: str) -> tuple[Divisor, dict[str, int]]:
    """The q-reduced divisor equivalent to ``d`` and a witness function.

    Returns ``(reduced, f)`` with ``reduced == d + laplacian(g, f)``.

    First the divisor is made effective away from ``q`` by pushing chips
    outward level by level from ``q`` (BFS levels); then Dhar's burning
    algorithm repeatedly fires the unburnt set until everything burns.
    """
    g.vertex_index(q)
    d = check_divisor(g, d)
    f = {v: 0 for v in g.vertices}
    c = dict(d)
    level = _bfs_levels(g, q)
    depth = max(level.values())
    by_level: list[list[str]] = [[] for _ in range(depth + 1)]
    for v in g.vertices:
        by_level[level[v]].append(v)

    def fire(x):
        for e in g.edges:
            if (e.tail in x) != (e.head in x):
                inside, outside = (e.tail, e.head) if e.tail in x else (e.head, e.tail)
                c[inside] = c.get(inside, 0) - 1
                c[outside] = c.get(outside, 0) + 1
        for v in x:
            f[v] += 1

    # every vertex at level k+1 has a neighbour at level k, so firing the
    # ball of radius k strictly raises each of them
    for k in range(depth - 1, -1, -1):
        ball = frozenset(v for v in g.vertices if level[v] <= k)
        while any(c.get(v, 0) < 0 for v in by_level[k + 1]):
            fire(ball)

    while True:
        unburnt = _burn(g, Divisor(c), q)
        if not unburnt:
            break
        fire(unburnt)
    return Divisor(c), f


def is_q_reduced(g: WeightedGraph, d: Mapping, q: str) -> Verdict:
    """Check effectivity off ``q`` and the no-legal-set-firing condition.

    On failure the witness is either a vertex with a negative coefficient
    or a nonempty vertex set avoiding ``q`` in which every vertex ``p``
    holds at least as many chips as edges leaving the set at ``p``.
    """
    g.vertex_index(q)
    d = check_divisor(g, d)
    for v in g.vertices:
        if v != q and d[v] < 0:
            return Verdict(False, v)
    unburnt = _burn(g, d, q)
    if unburnt:
        return Verdict(False, unburnt)
    return Verdict(True, None)


def outdeg(g: WeightedGraph, x: Iterable[str], p: str) -> int:
    """Number of edges at ``p`` leading out of ``x``."""
    x = g.check_vertices(x)
    return sum(1 for e in g.incident(p) if e.other(p) not in x)


def is_equivalent(g: WeightedGraph, d1: Mapping, d2: Mapping) -> bool:
    d1, d2 = check_divisor(g, d1), check_divisor(g, d2)
    if d1.degree != d2.degree:
        return False
    q = g.vertices[0]
    return dhar_reduce(g, d1, q)[0] == dhar_reduce(g, d2, q)[0]


def cut_chi_identity_gap(g: WeightedGraph, s, t, d) -> int:
    """Left minus right side of the submodular identity for chi.

    ``chi(S) + chi(T) - chi(S|T) - chi(S&T) - e(S-T, T-S)``; always 0.
    """
    s, t = g.check_vertices(s), g.check_vertices(t)
    return (
        chi(g, s, d)
        + chi(g, t, d)
        - chi(g, s | t, d)
        - chi(g, s & t, d)
        - cut_count(g, s - t, t - s)
    )
