from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from breakdiv.linalg import bareiss_det, det_exact, inverse, matmul, rank, solve, transpose
from oracles import det_by_expansion


def square(n_max=4):
    return st.integers(0, n_max).flatmap(
        lambda n: st.lists(
            st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=n, max_size=n),
            min_size=n,
            max_size=n,
        )
    )


def test_examples():
    assert det_exact([[3, 1], [1, 3]]) == 8
    assert det_exact([[3]]) == 3
    assert det_exact([]) == 1
    assert det_exact([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1


def test_zero_pivot_and_singular():
    assert det_exact([[0, 1], [1, 0]]) == -1
    assert det_exact([[1, 2], [2, 4]]) == 0
    assert bareiss_det([[0, 0], [0, 5]]) == 0


def test_not_square():
    with pytest.raises(ValueError):
        det_exact([[1, 2]])


@settings(max_examples=150, deadline=None)
@given(square())
def test_det_matches_expansion(m):
    assert det_exact(m) == det_by_expansion(m)


@settings(max_examples=80, deadline=None)
@given(square(3))
def test_inverse_and_solve(m):
    if det_by_expansion(m) == 0 or not m:
        return
    inv = inverse(m)
    n = len(m)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    assert matmul(m, inv) == ident
    b = [Fraction(i + 1) for i in range(n)]
    x = solve(m, b)
    assert [sum(r * y for r, y in zip(row, x)) for row in m] == b


def test_rank_and_transpose():
    assert rank([[1, 2, 3], [2, 4, 6], [0, 1, 1]]) == 2
    assert transpose([[1, 2, 3]]) == [[1], [2], [3]]
