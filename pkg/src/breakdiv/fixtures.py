"""Small named graphs and a seeded random-graph generator."""

from __future__ import annotations

import random
from fractions import Fraction

from .graph import Edge, WeightedGraph


def _graph(vertices, edges) -> WeightedGraph:
    return WeightedGraph(vertices, [Edge(i, a, b, Fraction(l)) for i, a, b, l in edges])


def theta() -> WeightedGraph:
    """Two vertices joined by edges of lengths 2, 1, 2."""
    return _graph(["u", "v"], [("a", "u", "v", 2), ("b", "u", "v", 1), ("c", "u", "v", 2)])


def theta_unit() -> WeightedGraph:
    """The theta graph with its long edges split at their midpoints."""
    return _graph(
        ["u", "v", "x", "y"],
        [
            ("a1", "u", "x", 1),
            ("a2", "x", "v", 1),
            ("b", "u", "v", 1),
            ("c1", "u", "y", 1),
            ("c2", "y", "v", 1),
        ],
    )


def triangle() -> WeightedGraph:
    return _graph(
        ["v1", "v2", "v3"],
        [("e12", "v1", "v2", 1), ("e13", "v1", "v3", 1), ("e23", "v2", "v3", 1)],
    )


def path3() -> WeightedGraph:
    return _graph(["p1", "p2", "p3"], [("f1", "p1", "p2", 1), ("f2", "p2", "p3", 1)])


def random_graph(
    rng: random.Random, max_vertices: int = 6, max_edges: int = 9, max_length: int = 5
) -> WeightedGraph:
    """Connected loopless multigraph with integer lengths in ``1..max_length``.

    A random spanning tree is laid down first, then extra (possibly
    parallel) edges up to a random total.
    """
    n = rng.randint(1, max_vertices)
    vertices = [f"n{i}" for i in range(n)]
    pairs = []
    for i in range(1, n):
        pairs.append((vertices[rng.randrange(i)], vertices[i]))
    if n >= 2:
        total = rng.randint(n - 1, max(n - 1, max_edges))
        while len(pairs) < total:
            a, b = rng.sample(vertices, 2)
            pairs.append((a, b))
    rng.shuffle(pairs)
    edges = [
        Edge(f"e{i}", a, b, Fraction(rng.randint(1, max_length))) for i, (a, b) in enumerate(pairs)
    ]
    return WeightedGraph(vertices, edges)
