"""Bivariate Laurent polynomials with exact rational coefficients.

Used for torus characteristic polynomials P(z, w).  Coefficients are stored
sparsely as ``{(i, j): Fraction}`` with zero entries dropped, so equality is
literal dictionary equality.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Mapping

Exponent = tuple[int, int]


class LaurentPoly2:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[Exponent, Fraction | int | str] | None = None):
        clean: dict[Exponent, Fraction] = {}
        if coeffs:
            for (i, j), c in coeffs.items():
                c = Fraction(c)
                if c:
                    key = (int(i), int(j))
                    clean[key] = clean.get(key, Fraction(0)) + c
                    if not clean[key]:
                        del clean[key]
        self.coeffs = clean

    # ---- constructors ----

    @classmethod
    def constant(cls, c) -> "LaurentPoly2":
        return cls({(0, 0): Fraction(c)})

    @classmethod
    def monomial(cls, i: int, j: int, c=1) -> "LaurentPoly2":
        return cls({(i, j): Fraction(c)})

    # ---- ring operations ----

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __neg__(self) -> "LaurentPoly2":
        return LaurentPoly2({k: -v for k, v in self.coeffs.items()})

    def __add__(self, other) -> "LaurentPoly2":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k, Fraction(0)) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        p = LaurentPoly2.__new__(LaurentPoly2)
        p.coeffs = out
        return p

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "LaurentPoly2":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        out: dict[Exponent, Fraction] = {}
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                k = (i1 + i2, j1 + j2)
                s = out.get(k, Fraction(0)) + c1 * c2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        p = LaurentPoly2.__new__(LaurentPoly2)
        p.coeffs = out
        return p

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LaurentPoly2":
        # scalar division only
        c = Fraction(other)
        return LaurentPoly2({k: v / c for k, v in self.coeffs.items()})

    def __pow__(self, n: int) -> "LaurentPoly2":
        if n < 0:
            raise ValueError("negative powers of polynomials are not defined")
        result = LaurentPoly2.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # ---- queries ----

    def coefficient(self, i: int, j: int) -> Fraction:
        return self.coeffs.get((i, j), Fraction(0))

    def terms(self) -> Iterator[tuple[int, int, Fraction]]:
        """Terms (i, j, coeff) in lexicographic exponent order."""
        for (i, j) in sorted(self.coeffs):
            yield i, j, self.coeffs[(i, j)]

    def newton_points(self) -> list[Exponent]:
        return sorted(self.coeffs)

    def evaluate(self, z: complex, w: complex) -> complex:
        total = 0j
        for (i, j), c in self.coeffs.items():
            total += complex(c) * z**i * w**j
        return total

    def evaluate_exact(self, z: Fraction, w: Fraction) -> Fraction:
        total = Fraction(0)
        for (i, j), c in self.coeffs.items():
            total += c * z**i * w**j
        return total

    def subs_signs(self, sz: int, sw: int) -> "LaurentPoly2":
        """The polynomial P(sz*z, sw*w) for sz, sw in {+1, -1}."""
        if sz not in (1, -1) or sw not in (1, -1):
            raise ValueError("sign substitution expects +/-1")
        return LaurentPoly2({(i, j): c * sz**i * sw**j for (i, j), c in self.coeffs.items()})

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, j, c in self.terms():
            mono = "*".join(
                ([f"z^{i}" if i != 1 else "z"] if i else [])
                + ([f"w^{j}" if j != 1 else "w"] if j else [])
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"LaurentPoly2({self.coeffs!r})"


def _coerce(x) -> LaurentPoly2 | None:
    if isinstance(x, LaurentPoly2):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentPoly2.constant(x)
    return None


Z = LaurentPoly2.monomial(1, 0)
W = LaurentPoly2.monomial(0, 1)
ONE = LaurentPoly2.constant(1)


def det_laurent(rows: list[list[LaurentPoly2]]) -> LaurentPoly2:
    """Determinant of a square matrix of Laurent polynomials.

    Memoized expansion over column subsets; division-free, and plenty fast
    for the small matrices produced by fundamental-domain constructions.
    """
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of non-square matrix")
    if n == 0:
        return LaurentPoly2.constant(1)
    cache: dict[tuple[int, ...], LaurentPoly2] = {(): LaurentPoly2.constant(1)}

    def minor(cols: tuple[int, ...]) -> LaurentPoly2:
        # determinant of the submatrix on the last len(cols) rows and columns `cols`
        if cols in cache:
            return cache[cols]
        r = n - len(cols)
        total = LaurentPoly2()
        for pos, c in enumerate(cols):
            entry = rows[r][c]
            if not entry:
                continue
            sub = minor(cols[:pos] + cols[pos + 1 :])
            term = entry * sub
            total = total + term if pos % 2 == 0 else total - term
        cache[cols] = total
        return total

    return minor(tuple(range(n)))
