"""Exact rational linear algebra used throughout the package."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multiweb.linalg import (
    SingularMatrixError,
    adjugate,
    det,
    identity,
    inverse,
    mat,
    mat_mul,
    mat_vec,
    maximal_minors,
    minor_det,
    rank,
    solve,
    submatrix,
    transpose,
)

small_entry = st.integers(min_value=-5, max_value=5)
small_matrix = st.lists(
    st.lists(small_entry, min_size=3, max_size=3), min_size=3, max_size=3
).map(mat)


def random_invertible(rng: random.Random, n: int = 3):
    # diagositively dominant, hence invertible
    rows = [[Fraction(rng.randint(-4, 4)) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        rows[i][i] += 10
    return mat(rows)


def test_det_known_values():
    assert det(mat([[2, 3], [5, 7]])) == -1
    assert det(mat([[1, 2, 3], [4, 5, 6], [7, 8, 10]])) == -3
    assert det(identity(4)) == 1


def test_det_singular_is_zero():
    assert det(mat([[1, 2], [2, 4]])) == 0
    assert det(mat([[1, 2, 3], [4, 5, 6], [5, 7, 9]])) == 0


def test_solve_roundtrip():
    rng = random.Random(0)
    a = random_invertible(rng)
    x = (Fraction(1, 2), Fraction(-3), Fraction(5, 7))
    b = mat_vec(a, x)
    assert solve(a, b) == x


def test_solve_singular_raises():
    a = mat([[1, 2], [2, 4]])
    with pytest.raises(SingularMatrixError):
        solve(a, (Fraction(1), Fraction(1)))


def test_inverse():
    rng = random.Random(1)
    a = random_invertible(rng)
    assert mat_mul(a, inverse(a)) == identity(3)
    assert mat_mul(inverse(a), a) == identity(3)


def test_inverse_singular_raises():
    with pytest.raises(SingularMatrixError):
        inverse(mat([[1, 1], [1, 1]]))


def test_adjugate_identity_including_singular():
    rng = random.Random(2)
    a = random_invertible(rng)
    d = det(a)
    assert mat_mul(a, adjugate(a)) == mat([[d, 0, 0], [0, d, 0], [0, 0, d]])
    s = mat([[1, 2, 3], [2, 4, 6], [1, 0, 1]])  # rank 2
    assert mat_mul(s, adjugate(s)) == mat([[0] * 3] * 3)


def test_rank():
    assert rank(identity(4)) == 4
    assert rank(mat([[0, 0], [0, 0]])) == 0
    assert rank(mat([[1, 2], [2, 4], [3, 6]])) == 1
    assert rank(mat([[1, 0, -1], [0, 1, 1]])) == 2


def test_submatrix_and_minor_det():
    a = mat([[1, 2, 3], [4, 5, 6], [7, 8, 10]])
    sub = submatrix(a, [0, 2], [1, 2])
    assert sub == mat([[2, 3], [8, 10]])
    assert minor_det(a, [0, 2], [1, 2]) == det(sub)


def test_transpose():
    a = mat([[1, 2, 3], [4, 5, 6]])
    assert transpose(a) == mat([[1, 4], [2, 5], [3, 6]])
    assert transpose(transpose(a)) == a


def test_maximal_minors_one_based_keys():
    a = mat([[1, 0, -1, -3], [0, 1, 1, 2]])
    minors = maximal_minors(a)
    assert minors == {
        (1, 2): 1,
        (1, 3): 1,
        (1, 4): 2,
        (2, 3): 1,
        (2, 4): 3,
        (3, 4): 1,
    }


def test_maximal_minors_single_row():
    assert maximal_minors(mat([[2, 0, -5]])) == {(1,): 2, (2,): 0, (3,): -5}


@settings(max_examples=40, deadline=None)
@given(small_matrix, small_matrix)
def test_det_multiplicative(a, b):
    assert det(mat_mul(a, b)) == det(a) * det(b)


@settings(max_examples=40, deadline=None)
@given(small_matrix)
def test_det_transpose_invariant(a):
    assert det(transpose(a)) == det(a)
