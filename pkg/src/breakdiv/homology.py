"""Cycle lattice, Jacobian volumes, Abel-Jacobi coordinates, Matrix-Tree.

The edge space carries the inner product ``<c, c'> = sum_e len(e) c_e c'_e``.
The fundamental cycles of a spanning tree form a basis of the cycle
lattice; the Gram matrix in that basis has determinant equal to the sum
over spanning trees of the product of lengths of the edges *off* the tree.
All values are exact Fractions.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import BreakdivError, EdgeInTree
from .graph import (
    WeightedGraph,
    fundamental_cycles,
    is_spanning_tree,
    non_tree_edges,
    spanning_trees,
    tree_path,
)
from .linalg import det_exact, inverse, matmul


class ConductanceMode(enum.Enum):
    LENGTH = "length"
    INVERSE_LENGTH = "inverse"


@dataclass(frozen=True)
class GramMatrix:
    matrix: tuple[tuple[Fraction, ...], ...]
    tree: tuple[str, ...]
    cycle_edges: tuple[str, ...]  # the non-tree edge defining each basis cycle

    @property
    def size(self) -> int:
        return len(self.matrix)

    def rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self.matrix]


class TreeWeight(NamedTuple):
    tree: tuple[str, ...]
    w: Fraction  # product of lengths off the tree
    w_prime: Fraction  # product of conductances on the tree


class TreeWeightTable(NamedTuple):
    weights: list[TreeWeight]
    w_total: Fraction
    w_prime_total: Fraction


class CellVolume(NamedTuple):
    tree: tuple[str, ...]
    w: Fraction
    vol_sq: Fraction
    vol_ratio: Fraction


class VolumeReport(NamedTuple):
    det_M: Fraction
    cells: list[CellVolume]

    @property
    def ratio_sum(self) -> Fraction:
        return sum((c.vol_ratio for c in self.cells), Fraction(0))

    def approx_volumes(self) -> list[float]:
        """Decimal cell volumes; for display only."""
        return [math.sqrt(c.vol_sq) for c in self.cells]


def _inner(g: WeightedGraph, a: Mapping, b: Mapping) -> Fraction:
    return sum((g.edge(e).length * c * b[e] for e, c in a.items() if e in b), Fraction(0))


class _CycleBasis:
    """Fundamental cycles of ``tree`` with their Gram matrix and inverse."""

    def __init__(self, g: WeightedGraph, tree: Sequence[str]):
        tree = tuple(tree)
        if not is_spanning_tree(g, tree):
            raise BreakdivError(f"{tree!r} is not a spanning tree")
        self.g = g
        self.tree = g.sorted_edges(tree)
        self.cycle_edges = non_tree_edges(g, tree)
        self.cycles = fundamental_cycles(g, tree)
        self.gram = [[_inner(g, a, b) for b in self.cycles] for a in self.cycles]
        self._inv = None

    @property
    def gram_inverse(self):
        if self._inv is None:
            self._inv = inverse(self.gram)
        return self._inv

    def coordinates(self, chain: Mapping[str, Fraction]) -> list[Fraction]:
        """Orthogonal projection of a real chain onto the cycle space."""
        rhs = [_inner(self.g, chain, c) for c in self.cycles]
        if not rhs:
            return []
        return [sum((m * r for m, r in zip(row, rhs)), Fraction(0)) for row in self.gram_inverse]


def gram_matrix(g: WeightedGraph, t: Sequence[str]) -> GramMatrix:
    """Gram matrix of the fundamental cycles of ``t`` (non-tree edge order)."""
    basis = _CycleBasis(g, t)
    return GramMatrix(tuple(map(tuple, basis.gram)), basis.tree, basis.cycle_edges)


def _conductance(length: Fraction, mode: ConductanceMode) -> Fraction:
    mode = ConductanceMode(mode)
    return length if mode is ConductanceMode.LENGTH else 1 / length


def tree_weights(
    g: WeightedGraph, mode: ConductanceMode | str = ConductanceMode.INVERSE_LENGTH
) -> TreeWeightTable:
    """Weight and coweight of every spanning tree, plus the totals."""
    rows = []
    for t in spanning_trees(g):
        inside = set(t)
        w = math.prod((e.length for e in g.edges if e.id not in inside), start=Fraction(1))
        wp = math.prod(
            (_conductance(e.length, mode) for e in g.edges if e.id in inside), start=Fraction(1)
        )
        rows.append(TreeWeight(t, w, wp))
    return TreeWeightTable(
        rows,
        sum((r.w for r in rows), Fraction(0)),
        sum((r.w_prime for r in rows), Fraction(0)),
    )


def dual_kirchhoff_check(g: WeightedGraph) -> tuple[bool, Fraction, Fraction]:
    """Compare det(Gram) with the tree-weight sum.

    Also requires the determinant to be the same for every tree's basis.
    """
    trees = spanning_trees(g)
    dets = {det_exact(gram_matrix(g, t).matrix) for t in trees}
    det_m = det_exact(gram_matrix(g, trees[0]).matrix)
    w_g = tree_weights(g).w_total
    return (len(dets) == 1 and det_m == w_g), det_m, w_g


def cell_volumes(g: WeightedGraph) -> VolumeReport:
    trees = spanning_trees(g)
    det_m = det_exact(gram_matrix(g, trees[0]).matrix)
    cells = [
        CellVolume(tw.tree, tw.w, tw.w * tw.w / det_m, tw.w / det_m)
        for tw in tree_weights(g).weights
    ]
    return VolumeReport(det_m, cells)


def projection(g: WeightedGraph, basis_tree: Sequence[str], e: str) -> list[Fraction]:
    """Coordinates of the projection of edge ``e`` onto the cycle space."""
    g.edge(e)
    return _CycleBasis(g, basis_tree).coordinates({e: Fraction(1)})


def edge_projection(g: WeightedGraph, t: Sequence[str], e: str) -> list[Fraction]:
    """Projection of non-tree edge ``e`` in the fundamental-cycle basis of ``t``.

    Equals ``len(e)`` times the row of the inverse Gram matrix belonging
    to ``e``.
    """
    if e in set(t):
        raise EdgeInTree(f"edge {e!r} belongs to the tree")
    return projection(g, t, e)


def cell_gram(g: WeightedGraph, t: Sequence[str]) -> list[list[Fraction]]:
    """Gram matrix of the projected non-tree edges of ``t``.

    Its determinant is the squared volume of the cell belonging to ``t``.
    """
    basis = _CycleBasis(g, t)
    rows = [basis.coordinates({e: Fraction(1)}) for e in basis.cycle_edges]
    if not rows:
        return []
    return matmul(matmul(rows, basis.gram), [list(c) for c in zip(*rows)])


# -- Abel-Jacobi -----------------------------------------------------------


@dataclass(frozen=True)
class JacCoordinate:
    """A point of the Jacobian torus in a fixed cycle basis.

    Coordinates lie in ``[0, 1)``.  Comparing coordinates taken in
    different bases raises ``TypeError``.
    """

    coords: tuple[Fraction, ...]
    base_point: str
    tree: tuple[str, ...]

    def __eq__(self, other):
        if not isinstance(other, JacCoordinate):
            return NotImplemented
        if (self.base_point, self.tree) != (other.base_point, other.tree):
            raise TypeError("Jacobian coordinates taken in different bases")
        return self.coords == other.coords

    def __hash__(self):
        return hash((self.coords, self.base_point, self.tree))


def _point_chain(g: WeightedGraph, tree, q: str, p) -> dict[str, Fraction]:
    """A real chain with boundary ``(p) - (q)``."""
    if isinstance(p, str):
        return dict(tree_path(g, tree, q, p))
    if p.is_vertex:
        return dict(tree_path(g, tree, q, p.vertex))
    e = g.edge(p.edge)
    chain: dict[str, Fraction] = dict(tree_path(g, tree, q, e.tail))
    chain[e.id] = chain.get(e.id, 0) + p.offset / e.length
    return chain


def _frac_part(x: Fraction) -> Fraction:
    return x - math.floor(x)


def abel_jacobi(
    g: WeightedGraph, d: Mapping, q: str | None = None, t_base: Sequence[str] | None = None
) -> JacCoordinate:
    """Image of ``d - deg(d) (q)`` in the Jacobian.

    ``d`` may be keyed by vertex ids or by metric points.  The basis
    defaults to the first vertex and the first spanning tree.
    """
    q = g.vertices[0] if q is None else q
    g.vertex_index(q)
    tree = tuple(spanning_trees(g)[0] if t_base is None else t_base)
    basis = _CycleBasis(g, tree)
    chain: dict[str, Fraction] = {}
    for p, c in d.items():
        for e, x in _point_chain(g, tree, q, p).items():
            chain[e] = chain.get(e, 0) + c * x
    total = basis.coordinates(chain)
    return JacCoordinate(tuple(_frac_part(x) for x in total), q, basis.tree)


def jac_equivalent(
    g: WeightedGraph, d1: Mapping, d2: Mapping, q: str | None = None, t_base=None
) -> bool:
    if sum(d1.values()) != sum(d2.values()):
        return False
    return abel_jacobi(g, d1, q, t_base) == abel_jacobi(g, d2, q, t_base)


# -- the usual Matrix-Tree theorem -----------------------------------------


def weighted_laplacian(g: WeightedGraph, mode: ConductanceMode | str) -> list[list[Fraction]]:
    n = len(g.vertices)
    q = [[Fraction(0)] * n for _ in range(n)]
    for e in g.edges:
        c = _conductance(e.length, mode)
        a, b = g.vertex_index(e.tail), g.vertex_index(e.head)
        q[a][a] += c
        q[b][b] += c
        q[a][b] -= c
        q[b][a] -= c
    return q


def reduced_laplacian_det(
    g: WeightedGraph, q: str | None = None, mode: ConductanceMode | str = ConductanceMode.INVERSE_LENGTH
) -> Fraction:
    """Determinant of the weighted Laplacian with row and column ``q`` removed."""
    if len(g.vertices) < 2:
        raise BreakdivError("reduced Laplacian needs at least two vertices")
    q = g.vertices[0] if q is None else q
    k = g.vertex_index(q)
    lap = weighted_laplacian(g, mode)
    reduced = [row[:k] + row[k + 1 :] for i, row in enumerate(lap) if i != k]
    return det_exact(reduced)


def tree_conductance_sum(g: WeightedGraph, mode: ConductanceMode | str) -> Fraction:
    """Sum over spanning trees of the product of conductances on the tree."""
    return tree_weights(g, mode).w_prime_total


# -- Cauchy-Binet ----------------------------------------------------------


def cycle_matrix(g: WeightedGraph, t: Sequence[str]) -> list[list[int]]:
    """Signed incidence of fundamental cycles (rows) against edges (columns)."""
    return [[c.get(e.id, 0) for e in g.edges] for c in fundamental_cycles(g, t)]


def cauchy_binet_check(g: WeightedGraph, t: Sequence[str]) -> tuple[bool, Fraction]:
    """Expand det(Gram) as a sum of squared maximal minors.

    Each term belongs to a g-subset ``J`` of edges and must equal the
    weight of the spanning tree ``E - J`` when that is a tree, 0 otherwise.
    """
    rows = cycle_matrix(g, t)
    genus = len(rows)
    det_m = det_exact(gram_matrix(g, t).matrix)
    total = Fraction(0)
    ok = True
    for cols in itertools.combinations(range(len(g.edges)), genus):
        minor = det_exact([[r[j] for j in cols] for r in rows])
        weight = math.prod((g.edges[j].length for j in cols), start=Fraction(1))
        term = minor * minor * weight
        rest = [g.edges[j].id for j in range(len(g.edges)) if j not in cols]
        expected = weight if is_spanning_tree(g, rest) else Fraction(0)
        ok = ok and term == expected
        total += term
    return ok and total == det_m, total

