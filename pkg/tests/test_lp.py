from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from olg.lp import find_feasible


def check(A, b, x):
    assert all(v >= 0 for v in x)
    for row, rhs in zip(A, b):
        assert sum(a * v for a, v in zip(row, x)) == rhs


def test_simple_feasible():
    A = [[1, 1, 0], [0, 1, 1]]
    b = [1, 1]
    x = find_feasible(A, b)
    check(A, b, x)


def test_infeasible_sign():
    assert find_feasible([[1, 1]], [-1]) is None


def test_negative_rhs_feasible():
    A = [[-1, 1]]
    x = find_feasible(A, [-2])
    check(A, [-2], x)


def test_redundant_rows():
    A = [[1, 1], [2, 2], [1, 1]]
    x = find_feasible(A, [1, 2, 1])
    check(A, [1, 2, 1], x)
    assert find_feasible(A, [1, 3, 1]) is None


def test_empty_system():
    assert find_feasible([], []) == []


def test_ragged():
    with pytest.raises(ValueError):
        find_feasible([[1, 2], [1]], [0, 0])
    with pytest.raises(ValueError):
        find_feasible([[1]], [0, 0])


def test_degenerate_cycling_instance():
    # Beale's classic cycling example, phrased as feasibility with a target value
    A = [
        [Fraction(1, 4), -8, -1, 9, 1, 0, 0],
        [Fraction(1, 2), -12, Fraction(-1, 2), 3, 0, 1, 0],
        [0, 0, 1, 0, 0, 0, 1],
    ]
    b = [0, 0, 1]
    x = find_feasible(A, b)
    check(A, b, x)


small = st.integers(-4, 4)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 3).flatmap(lambda m: st.tuples(
    st.lists(st.lists(small, min_size=4, max_size=4), min_size=m, max_size=m),
    st.lists(st.integers(0, 3), min_size=4, max_size=4),
)))
def test_planted_solution_found(data):
    A, x0 = data
    b = [sum(a * v for a, v in zip(row, x0)) for row in A]
    x = find_feasible(A, b)
    assert x is not None
    check(A, b, x)
