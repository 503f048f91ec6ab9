"""Two-variable Laurent polynomials and their determinants."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations

import pytest

from multiweb.laurent import ONE, W, Z, LaurentPoly2, det_laurent
from multiweb.linalg import det as det_q
from multiweb.linalg import mat


def brute_det(rows):
    n = len(rows)
    total = LaurentPoly2()
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = LaurentPoly2.constant(sign)
        for i in range(n):
            term = term * rows[i][perm[i]]
        total = total + term
    return total


def random_poly(rng: random.Random) -> LaurentPoly2:
    coeffs = {}
    for _ in range(rng.randint(0, 3)):
        coeffs[(rng.randint(-2, 2), rng.randint(-2, 2))] = rng.randint(-3, 3)
    return LaurentPoly2(coeffs)


def test_zero_coefficients_dropped():
    assert LaurentPoly2({(0, 0): 0, (1, 2): 0}) == LaurentPoly2()
    assert not LaurentPoly2()
    assert LaurentPoly2.constant(0) == 0


def test_arithmetic():
    assert (ONE + Z) * (ONE - Z) == ONE - Z * Z
    assert Z + W - Z == W
    assert 1 + Z == Z + 1
    assert 2 - Z == -(Z - 2)
    assert Fraction(1, 2) * (Z + Z) == Z
    assert (2 * Z + 2 * W) / 2 == Z + W


def test_pow():
    p = ONE + Z + W
    assert p**0 == ONE
    assert p**2 == p * p
    assert p**3 == p * p * p
    with pytest.raises(ValueError):
        p ** (-1)


def test_monomials_with_negative_exponents():
    zi = LaurentPoly2.monomial(-1, 0)
    assert Z * zi == ONE
    assert zi.coefficient(-1, 0) == 1
    assert zi.coefficient(0, 0) == 0


def test_terms_and_newton_points_sorted():
    p = W + Z + LaurentPoly2.monomial(-1, 2, 5)
    assert list(p.terms()) == [(-1, 2, 5), (0, 1, 1), (1, 0, 1)]
    assert p.newton_points() == [(-1, 2), (0, 1), (1, 0)]


def test_evaluate():
    p = LaurentPoly2.monomial(2, -1) + 3
    assert p.evaluate_exact(Fraction(2), Fraction(4)) == 4
    assert p.evaluate(2, 4) == pytest.approx(4)
    assert p.evaluate(1j, 1) == pytest.approx(2 + 0j)


def test_subs_signs():
    p = Z + W + Z * W
    assert p.subs_signs(1, 1) == p
    assert p.subs_signs(-1, 1) == -Z + W - Z * W
    assert p.subs_signs(-1, -1) == -Z - W + Z * W
    with pytest.raises(ValueError):
        p.subs_signs(2, 1)


def test_str():
    assert str(LaurentPoly2()) == "0"
    assert str(Z * W) == "z*w"
    assert str(ONE - W) == "1 - w"


def test_det_laurent_small():
    assert det_laurent([]) == ONE
    assert det_laurent([[ONE + Z]]) == ONE + Z
    rows = [[ONE + Z, W], [ONE, ONE]]
    assert det_laurent(rows) == ONE + Z - W


def test_det_laurent_nonsquare_raises():
    with pytest.raises(ValueError):
        det_laurent([[ONE, Z]])


def test_det_laurent_matches_brute_force():
    rng = random.Random(7)
    for _ in range(5):
        rows = [[random_poly(rng) for _ in range(3)] for _ in range(3)]
        assert det_laurent(rows) == brute_det(rows)


def test_det_laurent_matches_rational_det_on_constants():
    rng = random.Random(8)
    rows_q = [[Fraction(rng.randint(-4, 4)) for _ in range(4)] for _ in range(4)]
    rows_p = [[LaurentPoly2.constant(c) for c in row] for row in rows_q]
    assert det_laurent(rows_p) == LaurentPoly2.constant(det_q(mat(rows_q)))
