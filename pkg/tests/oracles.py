"""Brute-force reference implementations used to cross-check the library.

Nothing here calls the algorithms under test; each oracle works straight
from a definition, by exhaustive search or plain linear algebra.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def subsets(items, nonempty=True):
    items = list(items)
    for r in range(1 if nonempty else 0, len(items) + 1):
        yield from (frozenset(c) for c in itertools.combinations(items, r))


def orientations(g):
    """Every orientation as a dict edge id -> head vertex."""
    for bits in itertools.product((0, 1), repeat=len(g.edges)):
        yield {e.id: (e.head if b == 0 else e.tail) for e, b in zip(g.edges, bits)}


def orientation_divisor(g, heads):
    indeg = {v: 0 for v in g.vertices}
    for h in heads.values():
        indeg[h] += 1
    return {v: k - 1 for v, k in indeg.items() if k != 1}


def reachable(g, heads, q):
    seen, stack = {q}, [q]
    while stack:
        v = stack.pop()
        for e in g.edges:
            h = heads[e.id]
            t = e.tail if h == e.head else e.head
            if t == v and h not in seen:
                seen.add(h)
                stack.append(h)
    return seen


def orientable_by_search(g, d, q=None):
    target = {v: c for v, c in d.items() if c}
    for heads in orientations(g):
        if orientation_divisor(g, heads) != target:
            continue
        if q is None or reachable(g, heads, q) == set(g.vertices):
            return True
    return False


def chi_by_count(g, s, d):
    s = set(s)
    inside = sum(1 for e in g.edges if e.tail in s and e.head in s)
    return sum(d.get(v, 0) for v in s) + len(s) - inside


def cut_between(g, s, t):
    return sum(1 for e in g.edges if (e.tail in s and e.head in t) or (e.tail in t and e.head in s))


def q_reduced_by_definition(g, d, q):
    """Effective off q, and every nonempty set avoiding q has a vertex
    with fewer chips than edges leaving the set."""
    if any(d.get(v, 0) < 0 for v in g.vertices if v != q):
        return False
    rest = [v for v in g.vertices if v != q]
    for x in subsets(rest):
        if all(d.get(v, 0) >= cut_between(g, {v}, set(g.vertices) - x) for v in x):
            return False
    return True


def integer_laplacian(g):
    idx = {v: i for i, v in enumerate(g.vertices)}
    n = len(g.vertices)
    m = [[0] * n for _ in range(n)]
    for e in g.edges:
        a, b = idx[e.tail], idx[e.head]
        m[a][a] += 1
        m[b][b] += 1
        m[a][b] -= 1
        m[b][a] -= 1
    return m


def _solve(a, b):
    """Gaussian elimination over Fractions for a nonsingular system."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] / m[i][i] for i in range(n)]


def equivalent_by_linear_algebra(g, d1, d2):
    """d1 - d2 lies in the integer image of the Laplacian."""
    diff = [d1.get(v, 0) - d2.get(v, 0) for v in g.vertices]
    if sum(diff):
        return False
    if len(g.vertices) == 1:
        return True
    lap = integer_laplacian(g)
    reduced = [row[1:] for row in lap[1:]]
    x = _solve(reduced, diff[1:])
    return all(v.denominator == 1 for v in x)


def det_by_expansion(m):
    n = len(m)
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term *= m[i][j]
        total += term
    return total


def trees_by_subsets(g):
    """Spanning trees as frozensets, by testing every (|V|-1)-subset."""
    n = len(g.vertices)
    out = []
    for combo in itertools.combinations(g.edges, n - 1):
        parent = {v: v for v in g.vertices}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        ok = True
        for e in combo:
            a, b = find(e.tail), find(e.head)
            if a == b:
                ok = False
                break
            parent[a] = b
        if ok:
            out.append(frozenset(e.id for e in combo))
    return out


def integral_break_divisors_by_trees(g):
    """One endpoint of every non-tree edge, over all spanning trees."""
    found = set()
    for tree in trees_by_subsets(g):
        off = [e for e in g.edges if e.id not in tree]
        for ends in itertools.product(*[(e.tail, e.head) for e in off]):
            d = {}
            for v in ends:
                d[v] = d.get(v, 0) + 1
            found.add(frozenset(d.items()))
    return [dict(x) for x in found]
