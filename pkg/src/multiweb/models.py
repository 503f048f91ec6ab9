"""Determinantal vertex models and honeycomb 2-web analysis.

This module covers the statistical-mechanics layer built on top of the
block-Kasteleyn machinery:

* free-fermionic six-vertex and twenty-vertex models whose local weights are
  the maximal minors of a 2x4 (resp. 3x6) matrix, with their characteristic
  (spectral) polynomials on the torus;
* Mahler-measure free energy per site, computed by one exact Jensen step and
  a midpoint quadrature in the remaining variable;
* amoeba point clouds and detection of bounded complementary components
  ("gas phases");
* the two-periodic honeycomb model with 2x2 edge matrices ``A`` and ``B``:
  its characteristic polynomial, the five-parameter reduced form
  ``P_red(z,w) = 1+(1+X1*X3)z+X1*X3 z^2+(1+X1*X2)w+X1*X2 w^2-(X1+X1*X2*X3)zw``
  with parameter recovery and realization, and exact trace-positivity tests.

Algebraic outputs of the reduced-parameter matching are kept exact whenever
they live in a single real quadratic field Q(sqrt(d)); see
:class:`QuadraticNumber`.  Otherwise the matcher falls back to floating point
and verification is tolerance-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Union

import numpy as np
from scipy import ndimage

from .connection import Connection, trace_multiweb
from .graph import BLACK, TORUS, WHITE, Edge, PlanarGraph, Vertex
from .grassmann import GrassmannPoint
from .honeycomb import HexPatch, patch_connection
from .kasteleyn import BlockKasteleyn, build_block_kasteleyn, det_expanded
from .laurent import LaurentPoly2
from .linalg import Mat, adjugate, det, inverse, mat, mat_mul, mat_sub
from .webs import iter_multiwebs


class ConvergenceError(RuntimeError):
    """A numerical routine did not reach the requested tolerance in budget."""


# ---------------------------------------------------------------------------
# Exact arithmetic in a real quadratic field Q(sqrt(d))
# ---------------------------------------------------------------------------


class _FieldMixError(ArithmeticError):
    """Operands live in different quadratic fields; exact arithmetic stops."""


def _square_free(n: int) -> tuple[int, int]:
    """Write ``n = s*s*f`` with ``f`` square-free; returns ``(s, f)``.

    Square factors with a prime divisor above the trial-division bound are
    not extracted; this only affects canonical form, not correctness of the
    field arithmetic, and such inputs simply fail field unification later.
    """
    if n < 0:
        raise ValueError("negative radicand")
    if n in (0, 1):
        return 1, n
    r = math.isqrt(n)
    if r * r == n:
        return r, 1
    s, f = 1, n
    p = 2
    while p * p <= f and p < 10_000:
        while f % (p * p) == 0:
            f //= p * p
            s *= p
        p += 1 if p == 2 else 2
    r = math.isqrt(f)
    if r * r == f:
        return s * r, 1
    return s, f


@dataclass(frozen=True)
class QuadraticNumber:
    """The real number ``a + b*sqrt(d)`` with rational a, b and d >= 0.

    ``d`` is square-free and ``d == 0`` exactly when the number is rational.
    Arithmetic between numbers of different (nonzero) fields raises
    :class:`ArithmeticError`; callers are expected to fall back to floats.
    """

    a: Fraction
    b: Fraction
    d: int

    @staticmethod
    def of(a, b=0, d: int = 0) -> "QuadraticNumber":
        a, b = Fraction(a), Fraction(b)
        if d < 0:
            raise ValueError("d must be nonnegative")
        if b == 0 or d == 0:
            return QuadraticNumber(a, Fraction(0), 0)
        s, f = _square_free(d)
        if f in (0, 1):
            return QuadraticNumber(a + b * s, Fraction(0), 0)
        return QuadraticNumber(a, b * s, f)

    # -- helpers ------------------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return self.d == 0

    def _common_d(self, other: "QuadraticNumber") -> int:
        if self.d == 0:
            return other.d
        if other.d in (0, self.d):
            return self.d
        raise _FieldMixError(f"sqrt({self.d}) and sqrt({other.d}) do not mix")

    @staticmethod
    def _lift(x) -> "QuadraticNumber":
        if isinstance(x, QuadraticNumber):
            return x
        return QuadraticNumber.of(Fraction(x))

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        return QuadraticNumber.of(self.a + other.a, self.b + other.b, self._common_d(other))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        d = self._common_d(other)
        return QuadraticNumber.of(
            self.a * other.a + self.b * other.b * d,
            self.a * other.b + self.b * other.a,
            d,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticNumber":
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            raise ZeroDivisionError("division by zero quadratic number")
        return QuadraticNumber.of(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    # -- order and conversion ----------------------------------------------
    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt(d)``."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        lhs = a * a
        rhs = b * b * self.d
        cmp = (lhs > rhs) - (lhs < rhs)
        return cmp if a > 0 else -cmp

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadraticNumber):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        try:
            o = Fraction(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.d == 0 and self.a == o

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def sqrt(self) -> "QuadraticNumber | None":
        """An exact square root inside some Q(sqrt(d)), or None.

        For rational inputs a root always exists (possibly in a new field);
        for irrational inputs only denestable roots ``u + v*sqrt(d)`` are
        found.  Negative numbers return None.
        """
        sgn = self.sign()
        if sgn < 0:
            return None
        if sgn == 0:
            return QuadraticNumber.of(0)
        if self.b == 0:
            n, m = self.a.numerator, self.a.denominator
            s, f = _square_free(n * m)
            if f == 1:
                return QuadraticNumber.of(Fraction(s, m))
            return QuadraticNumber.of(0, Fraction(s, m), f)
        # try sqrt(a + b sqrt(d)) = u + v sqrt(d)
        inner = self.a * self.a - self.b * self.b * self.d
        if inner < 0:
            return None
        rt = _exact_fraction_sqrt(inner)
        if rt is None:
            return None
        for branch in (self.a + rt, self.a - rt):
            u2 = branch / 2
            u = _exact_fraction_sqrt(u2)
            if u is not None and u != 0:
                v = self.b / (2 * u)
                cand = QuadraticNumber.of(u, v, self.d)
                if cand * cand == self and cand.sign() > 0:
                    return cand
        return None

    def minimal_polynomial(self) -> tuple[Fraction, ...]:
        """Monic minimal polynomial coefficients, constant term first."""
        if self.d == 0:
            return (-self.a, Fraction(1))
        return (self.a * self.a - self.b * self.b * self.d, -2 * self.a, Fraction(1))

    def __str__(self) -> str:
        if self.d == 0 or self.b == 0:
            return str(self.a)
        root = f"sqrt({self.d})" if abs(self.b) == 1 else f"{abs(self.b)}*sqrt({self.d})"
        if self.a == 0:
            return root if self.b > 0 else f"-{root}"
        return f"{self.a}{'+' if self.b > 0 else '-'}{root}"


def _exact_fraction_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, m = x.numerator, x.denominator
    rn, rm = math.isqrt(n), math.isqrt(m)
    if rn * rn == n and rm * rm == m:
        return Fraction(rn, rm)
    return None


Scalar = Union[Fraction, QuadraticNumber, float]


def _demote(x: QuadraticNumber) -> Scalar:
    """Return a plain Fraction when the quadratic number is rational."""
    return x.a if x.d == 0 else x


# ---------------------------------------------------------------------------
# Six-vertex model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SixVertexSpec:
    """Free-fermionic six-vertex weights from a 2x4 matrix.

    The six local weights are the maximal minors of ``point``:
    ``a1 = D12, a2 = D34, b1 = D14, b2 = D23, c1 = D13, c2 = D24``.
    By the Plucker relation they satisfy ``a1*a2 + b1*b2 - c1*c2 == 0``.
    """

    point: GrassmannPoint
    a1: Fraction
    a2: Fraction
    b1: Fraction
    b2: Fraction
    c1: Fraction
    c2: Fraction

    def __post_init__(self) -> None:
        if (self.point.k, self.point.n) != (2, 4):
            raise ValueError("six-vertex spec needs a 2x4 matrix")
        if self.free_fermion_defect != 0:
            raise ValueError("weights violate the free-fermion relation")

    @property
    def free_fermion_defect(self) -> Fraction:
        return self.a1 * self.a2 + self.b1 * self.b2 - self.c1 * self.c2

    @property
    def weights(self) -> dict[str, Fraction]:
        return {
            "a1": self.a1, "a2": self.a2,
            "b1": self.b1, "b2": self.b2,
            "c1": self.c1, "c2": self.c2,
        }


def sixv_weights(M) -> SixVertexSpec:
    """Build a six-vertex spec from a 2x4 matrix or Grassmannian point."""
    point = M if isinstance(M, GrassmannPoint) else GrassmannPoint(mat(M))
    if (point.k, point.n) != (2, 4):
        raise ValueError("six-vertex weights need a 2 x 4 point")
    p = point.plucker
    return SixVertexSpec(
        point=point,
        a1=p[(1, 2)], a2=p[(3, 4)],
        b1=p[(1, 4)], b2=p[(2, 3)],
        c1=p[(1, 3)], c2=p[(2, 4)],
    )


def sixv_charpoly(spec: SixVertexSpec) -> LaurentPoly2:
    """``P(z,w) = D12 + z*D23 + w*D14 - zw*D34``."""
    return LaurentPoly2({
        (0, 0): spec.a1,
        (1, 0): spec.b2,
        (0, 1): spec.b1,
        (1, 1): -spec.a2,
    })


def _column(matrix: Mat, col: int) -> Mat:
    return [[row[col]] for row in matrix]


def sixv_kasteleyn(spec: SixVertexSpec) -> BlockKasteleyn:
    """Fundamental-domain block Kasteleyn matrix of the six-vertex model.

    One white vertex of multiplicity 2 and the two black edge-midpoint
    vertices of the square lattice; the edge returning across the first
    torus direction carries the Kasteleyn sign -1, so the determinant is
    ``det(c1 - z c3 | c2 + w c4)``.
    """
    g = _sixv_torus_graph()
    m = spec.point.matrix
    conn = Connection({
        0: _column(m, 0),
        1: _column(m, 1),
        2: _column(m, 2),
        3: _column(m, 3),
    })
    signs = {0: 1, 1: 1, 2: -1, 3: 1}
    return build_block_kasteleyn(g, conn, signs)


def _sixv_torus_graph() -> PlanarGraph:
    white = Vertex(0, WHITE, 2, (0, 1, 2, 3), cilium=0)
    b_east = Vertex(1, BLACK, 1, (0, 2))
    b_north = Vertex(2, BLACK, 1, (1, 3))
    edges = [
        Edge(0, 1, 0, (0, 0)),
        Edge(1, 2, 0, (0, 0)),
        Edge(2, 1, 0, (1, 0)),
        Edge(3, 2, 0, (0, 1)),
    ]
    g = PlanarGraph([white, b_east, b_north], edges, surface=TORUS)
    g.check_valid()
    return g


# ---------------------------------------------------------------------------
# Twenty-vertex model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwentyVertexSpec:
    """Free-fermionic twenty-vertex weights: the 3x3 minors of a 3x6 matrix."""

    point: GrassmannPoint

    def __post_init__(self) -> None:
        if (self.point.k, self.point.n) != (3, 6):
            raise ValueError("twenty-vertex spec needs a 3x6 matrix")

    @property
    def weights(self) -> dict[tuple[int, int, int], Fraction]:
        return dict(self.point.plucker)


def twentyv_weights(M) -> TwentyVertexSpec:
    point = M if isinstance(M, GrassmannPoint) else GrassmannPoint(mat(M))
    if (point.k, point.n) != (3, 6):
        raise ValueError("twenty-vertex weights need a 3 x 6 point")
    return TwentyVertexSpec(point=point)


def twentyv_charpoly(spec: TwentyVertexSpec) -> LaurentPoly2:
    """``P = D123 + z D234 + zw D345 - w(D135+D246) + w^2 D456 + (w^2/z) D156 + (w/z) D126``."""
    p = spec.point.plucker
    return LaurentPoly2({
        (0, 0): p[(1, 2, 3)],
        (1, 0): p[(2, 3, 4)],
        (1, 1): p[(3, 4, 5)],
        (0, 1): -(p[(1, 3, 5)] + p[(2, 4, 6)]),
        (0, 2): p[(4, 5, 6)],
        (-1, 2): p[(1, 5, 6)],
        (-1, 1): p[(1, 2, 6)],
    })


def twentyv_kasteleyn(spec: TwentyVertexSpec) -> BlockKasteleyn:
    """Fundamental-domain block matrix ``(c1 + z c4 | c2 + w c5 | c3 + (w/z) c6)``.

    One white vertex of multiplicity 3 and the three black edge-midpoint
    vertices of the triangular lattice, with trivial Kasteleyn signs.
    """
    g = _twentyv_torus_graph()
    m = spec.point.matrix
    conn = Connection({eid: _column(m, eid) for eid in range(6)})
    signs = {eid: 1 for eid in range(6)}
    return build_block_kasteleyn(g, conn, signs)


def _twentyv_torus_graph() -> PlanarGraph:
    white = Vertex(0, WHITE, 3, (0, 1, 2, 3, 4, 5))
    blacks = [Vertex(1 + k, BLACK, 1, (k, k + 3)) for k in range(3)]
    homs = {3: (1, 0), 4: (0, 1), 5: (-1, 1)}
    edges = [Edge(eid, 1 + eid % 3, 0, homs.get(eid, (0, 0))) for eid in range(6)]
    g = PlanarGraph([white] + blacks, edges, surface=TORUS)
    g.check_valid()
    return g


def twentyv_afamily(a) -> tuple[TwentyVertexSpec, LaurentPoly2]:
    """One-parameter deformation of the six-fold symmetric point.

    Arm directions alternate around each vertex; the three arms in even
    positions carry weight ``a`` and the odd ones weight 1, so a minor
    picks up one factor of ``a`` per even-position arm.  The returned
    matrix is a rational row-rescaling of the trigonometric representative
    of the symmetric point with its even columns scaled by ``a``; its
    characteristic polynomial is exactly the closed form

        ``P(a) = a^2 + a z + a^2 zw + a w^2 + a^2 w^2/z + a w/z - 3(1+a^3) w``

    which is returned alongside the spec.  At ``a = 1`` the three molecule
    shapes carry minor-weights 1, 2, 3 and the spectral curve has a real
    node on the unit torus (liquid point).  For ``a != 1`` the node opens
    into a bounded complementary component of the amoeba: a gas phase.
    """
    a = Fraction(a)
    if a <= 0:
        raise ValueError("family parameter must be positive")
    half = Fraction(1, 2)
    matrix = mat([
        [a, 1, a, 1, a, 1],
        [a, half, -half * a, -1, -half * a, half],
        [0, 1, a, 0, -a, -1],
    ])
    closed = LaurentPoly2({
        (0, 0): a * a,
        (1, 0): a,
        (1, 1): a * a,
        (0, 2): a,
        (-1, 2): a * a,
        (-1, 1): a,
        (0, 1): -3 * (1 + a**3),
    })
    return twentyv_weights(matrix), closed


def molecule_classes(spec: TwentyVertexSpec) -> dict[tuple[int, ...], list[Fraction]]:
    """Group the twenty minors by the cyclic gap pattern of their index sets.

    A triple ``{i,j,k}`` of arm directions has gaps summing to 6; the sorted
    gap multiset distinguishes the three molecule shapes: ``(1,1,4)`` (two
    adjacent arms), ``(1,2,3)``, and ``(2,2,2)`` (arms at mutual 120 degrees).
    """
    out: dict[tuple[int, ...], list[Fraction]] = {}
    for key, value in sorted(spec.point.plucker.items()):
        i, j, k = key
        gaps = tuple(sorted((j - i, k - j, 6 + i - k)))
        out.setdefault(gaps, []).append(value)
    return out


# ---------------------------------------------------------------------------
# Honeycomb characteristic polynomial
# ---------------------------------------------------------------------------


@dataclass
class HoneycombSpec:
    """2x2 edge matrices for the two torus directions (identity on the third)."""

    A: Mat
    B: Mat

    def __post_init__(self) -> None:
        self.A = mat(self.A)
        self.B = mat(self.B)
        for name, m in (("A", self.A), ("B", self.B)):
            if len(m) != 2 or len(m[0]) != 2:
                raise ValueError(f"{name} must be 2x2")


def honeycomb_charpoly(h: HoneycombSpec) -> LaurentPoly2:
    """``P(z,w) = 1 + z tr A + w tr B + z^2 det A + w^2 det B + zw tr(A adj B)``.

    ``adj B = B^{-1} det B`` is the adjugate, so B need not be invertible.
    """
    t = mat_mul(h.A, adjugate(h.B))
    return LaurentPoly2({
        (0, 0): 1,
        (1, 0): h.A[0][0] + h.A[1][1],
        (0, 1): h.B[0][0] + h.B[1][1],
        (2, 0): det(h.A),
        (0, 2): det(h.B),
        (1, 1): t[0][0] + t[1][1],
    })


# ---------------------------------------------------------------------------
# Free energy (Mahler measure)
# ---------------------------------------------------------------------------


class FreeEnergy(NamedTuple):
    value: float
    error: float


def _poly_in_w(P: LaurentPoly2) -> tuple[dict[int, list[tuple[int, complex]]], int, int]:
    """Group terms by w-exponent, shifted so the lowest w-power is 0."""
    by_j: dict[int, list[tuple[int, complex]]] = {}
    for i, j, c in P.terms():
        by_j.setdefault(j, []).append((i, complex(c)))
    jmin = min(by_j)
    return {j - jmin: t for j, t in by_j.items()}, jmin, max(by_j) - jmin


def _batched_roots(C: np.ndarray) -> np.ndarray:
    """Roots of the polynomials with coefficient rows ``C`` (ascending degree).

    The leading column must be nonzero; rows are solved together via batched
    companion-matrix eigenvalues.
    """
    deg = C.shape[1] - 1
    if deg == 1:
        return (-C[:, 0] / C[:, 1])[:, None]
    monic = C[:, :-1] / C[:, -1:]
    comp = np.zeros((C.shape[0], deg, deg), dtype=complex)
    idx = np.arange(deg - 1)
    comp[:, idx + 1, idx] = 1.0
    comp[:, :, deg - 1] = -monic
    return np.linalg.eigvals(comp)


_LEAD_EPS = 1e-13


def _slice_values(by_j: dict[int, list[tuple[int, complex]]], deg: int, z: np.ndarray) -> np.ndarray:
    """Jensen value of ``phi -> log|P(z, e^{i phi})|`` for each point of ``z``.

    Returns ``log|c_deg(z)| + sum_k log max(1, |w_k(z)|)`` where ``w_k`` are
    the roots in ``w``.  Slices where the leading coefficient degenerates are
    deflated individually.
    """
    coeffs = np.zeros((len(z), deg + 1), dtype=complex)
    for j, entries in by_j.items():
        acc = np.zeros(len(z), dtype=complex)
        for i, c in entries:
            acc += c * z**i
        coeffs[:, j] = acc
    scale = np.abs(coeffs).max(axis=1)
    if np.any(scale == 0):
        raise ConvergenceError("polynomial vanishes identically on a slice")
    good = np.abs(coeffs[:, deg]) > _LEAD_EPS * scale
    out = np.empty(len(z), dtype=float)
    if np.any(good):
        roots = _batched_roots(coeffs[good])
        mags = np.abs(roots)
        out[good] = np.log(np.abs(coeffs[good, deg])) + np.where(
            mags > 1.0, np.log(mags), 0.0
        ).sum(axis=1)
    for k in np.nonzero(~good)[0]:
        row = coeffs[k]
        top = deg
        while top > 0 and abs(row[top]) <= _LEAD_EPS * scale[k]:
            top -= 1
        if top == 0:
            out[k] = math.log(abs(row[0]))
            continue
        roots = np.roots(row[: top + 1][::-1])
        mags = np.abs(roots)
        out[k] = math.log(abs(row[top])) + float(
            np.where(mags > 1.0, np.log(mags), 0.0).sum()
        )
    return out


def free_energy(P: LaurentPoly2, tol: float = 1e-4, *, max_points: int = 1 << 15) -> FreeEnergy:
    """Free energy per site: the Mahler measure of ``P``.

    ``(1/2pi)^2`` times the integral of ``log|P|`` over the unit torus.  The
    inner integral is evaluated exactly by Jensen's formula on each slice;
    the outer integral uses the midpoint rule on dyadically refined grids
    with Richardson extrapolation.  Returns the value and an error estimate
    (the last refinement difference); raises :class:`ConvergenceError` if the
    estimates do not settle within ``tol`` by ``max_points`` points.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    terms = list(P.terms())
    if not terms:
        raise ValueError("free energy of the zero polynomial is undefined")
    if len(terms) == 1:
        return FreeEnergy(math.log(abs(terms[0][2])), 0.0)
    by_j, _, deg = _poly_in_w(P)
    if deg == 0:
        flipped = LaurentPoly2({(j, i): c for i, j, c in terms})
        by_j, _, deg = _poly_in_w(flipped)

    def estimate(n: int) -> float:
        thetas = 2.0 * math.pi * (np.arange(n) + 0.5) / n
        return float(_slice_values(by_j, deg, np.exp(1j * thetas)).mean())

    n = 64
    prev = estimate(n)
    while n < max_points:
        n *= 2
        cur = estimate(n)
        diff = abs(cur - prev)
        if diff <= tol:
            return FreeEnergy(cur + (cur - prev) / 3.0, max(diff, 1e-15))
        prev = cur
    raise ConvergenceError(f"free energy did not converge within {max_points} points")


# ---------------------------------------------------------------------------
# Amoebas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AmoebaCloud:
    """Sampled points ``(log|z|, log|w|)`` of the zero set of a polynomial."""

    points: np.ndarray
    skipped_slices: int


def amoeba_cloud(P: LaurentPoly2, *, angles: int = 256, grid: int = 256,
                 span: float = 6.0) -> AmoebaCloud:
    """Point cloud of the amoeba of ``P``.

    For each modulus ``x`` on a uniform grid over ``[-span, span]`` and each
    phase ``theta``, the roots ``w`` of ``P(e^{x+i theta}, w) = 0`` contribute
    points ``(x, log|w|)``; a second sweep exchanges the roles of the
    variables.  Slices whose polynomial degenerates to a constant (or
    vanishes) are skipped and counted.
    """
    terms = list(P.terms())
    if len(terms) < 2:
        return AmoebaCloud(np.empty((0, 2)), 0)
    xs = np.linspace(-span, span, grid)
    thetas = 2.0 * math.pi * (np.arange(angles) + 0.5) / angles
    moduli, phases = np.meshgrid(xs, thetas, indexing="ij")
    zs = np.exp(moduli + 1j * phases).ravel()
    xflat = moduli.ravel()

    pieces = []
    skipped = 0
    for swap in (False, True):
        pts = {(j, i, c) for i, j, c in terms} if swap else terms
        by_j: dict[int, list[tuple[int, complex]]] = {}
        for i, j, c in pts:
            by_j.setdefault(j, []).append((i, complex(c)))
        jmin = min(by_j)
        by_j = {j - jmin: t for j, t in by_j.items()}
        deg = max(by_j)
        if deg == 0:
            skipped += len(zs)
            continue
        coeffs = np.zeros((len(zs), deg + 1), dtype=complex)
        for j, entries in by_j.items():
            acc = np.zeros(len(zs), dtype=complex)
            for i, c in entries:
                acc += c * zs**i
            coeffs[:, j] = acc
        scale = np.abs(coeffs).max(axis=1)
        good = (scale > 0) & (np.abs(coeffs[:, deg]) > _LEAD_EPS * scale)
        skipped += int((~good).sum())
        roots = _batched_roots(coeffs[good])
        mags = np.abs(roots)
        base = np.repeat(xflat[good][:, None], deg, axis=1)
        keep = mags > 0
        ys = np.log(mags[keep])
        xs_pts = base[keep]
        pieces.append(np.column_stack([ys, xs_pts] if swap else [xs_pts, ys]))
    points = np.concatenate(pieces) if pieces else np.empty((0, 2))
    return AmoebaCloud(points, skipped)


def _membership_distance(P: LaurentPoly2, x: float, y: float,
                         n_theta: int = 1024) -> float:
    """Distance from ``(x, y)`` to the amoeba along the ``log|w|`` axis.

    Sweeps ``z`` over the circle ``|z| = e^x`` and measures how close any
    root ``w`` of ``P(z, .)`` comes to ``|w| = e^y``.  A genuinely interior
    point of a complementary component has a strictly positive distance;
    sampling gaps in a point cloud do not.
    """
    by_j, _, deg = _poly_in_w(P)
    if deg == 0:
        flipped = LaurentPoly2({(j, i): c for i, j, c in P.terms()})
        by_j, _, deg = _poly_in_w(flipped)
        if deg == 0:
            return math.inf
        x, y = y, x
    z = np.exp(x + 1j * np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False))
    coeffs = np.zeros((n_theta, deg + 1), dtype=complex)
    for j, entries in by_j.items():
        acc = np.zeros(n_theta, dtype=complex)
        for i, c in entries:
            acc += c * z**i
        coeffs[:, j] = acc
    scale = np.abs(coeffs).max(axis=1)
    good = np.abs(coeffs[:, deg]) > _LEAD_EPS * np.maximum(scale, 1e-300)
    best = math.inf
    if np.any(good):
        mags = np.abs(_batched_roots(coeffs[good]))
        mags = mags[mags > 0]
        if mags.size:
            best = float(np.abs(np.log(mags) - y).min())
    for k in np.nonzero(~good)[0]:
        r = np.roots(coeffs[k, ::-1])
        r = np.abs(r[np.abs(r) > 0])
        if r.size:
            best = min(best, float(np.abs(np.log(r) - y).min()))
    return best


def gas_phase_detect(P: LaurentPoly2, cloud: AmoebaCloud, *,
                     bounds: tuple[float, float, float, float] | None = None,
                     resolution: int = 200, min_area_px: int = 4,
                     dilate: int = 1) -> dict:
    """Look for a bounded complementary component ("gas phase") of the amoeba.

    Rasterizes the cloud on ``resolution^2`` pixels over ``bounds``
    ``(xmin, xmax, ymin, ymax)`` (default: the cloud's bounding box), closes
    small sampling gaps by ``dilate`` rounds of binary dilation, labels the
    connected components of the complement, and reports the largest one that
    does not touch the frame.  ``witness`` is the centroid of that hole,
    ``hole_area`` its area in coordinate units.  A candidate hole is
    confirmed by re-solving the curve near the witness: the witness must
    sit strictly farther from the amoeba than half a pixel diagonal
    (``witness_distance``), which rules out sampling artifacts.  The result
    is flagged ``inconclusive`` when the cloud is too sparse to rasterize,
    when only sub-threshold holes (fewer than ``min_area_px`` pixels)
    appear, or when the confirmation test fails.
    """
    pts = cloud.points
    if len(pts) < 8:
        return {"has_bounded_hole": False, "witness": None, "witness_distance": None,
                "hole_area": 0.0, "hole_pixels": 0, "n_bounded_components": 0,
                "inconclusive": True}
    if bounds is None:
        xmin, ymin = pts.min(axis=0)
        xmax, ymax = pts.max(axis=0)
        mx, my = 0.05 * (xmax - xmin) + 1e-9, 0.05 * (ymax - ymin) + 1e-9
        bounds = (float(xmin - mx), float(xmax + mx), float(ymin - my), float(ymax + my))
    xmin, xmax, ymin, ymax = bounds
    px = (xmax - xmin) / resolution
    py = (ymax - ymin) / resolution
    ix = np.floor((pts[:, 0] - xmin) / px).astype(int)
    iy = np.floor((pts[:, 1] - ymin) / py).astype(int)
    keep = (ix >= 0) & (ix < resolution) & (iy >= 0) & (iy < resolution)
    raster = np.zeros((resolution, resolution), dtype=bool)
    raster[ix[keep], iy[keep]] = True
    if dilate:
        raster = ndimage.binary_dilation(raster, iterations=dilate)
    labels, count = ndimage.label(~raster)
    border = set(np.unique(labels[0, :])) | set(np.unique(labels[-1, :]))
    border |= set(np.unique(labels[:, 0])) | set(np.unique(labels[:, -1]))
    best_label, best_size = 0, 0
    n_bounded = 0
    sub_threshold = False
    if count:
        sizes = ndimage.sum_labels(np.ones_like(labels), labels, index=np.arange(1, count + 1))
        for lab, size in enumerate(sizes, start=1):
            if lab in border or size == 0:
                continue
            n_bounded += 1
            if size < min_area_px:
                sub_threshold = True
            elif size > best_size:
                best_label, best_size = lab, int(size)
    if best_label:
        ci, cj = ndimage.center_of_mass(labels == best_label)
        witness = (float(xmin + (ci + 0.5) * px), float(ymin + (cj + 0.5) * py))
        dist = _membership_distance(P, *witness)
        if dist > 0.5 * math.hypot(px, py):
            return {"has_bounded_hole": True, "witness": witness,
                    "witness_distance": dist,
                    "hole_area": best_size * px * py, "hole_pixels": best_size,
                    "n_bounded_components": n_bounded, "inconclusive": False}
        return {"has_bounded_hole": False, "witness": None,
                "witness_distance": dist, "hole_area": 0.0, "hole_pixels": 0,
                "n_bounded_components": n_bounded, "inconclusive": True}
    return {"has_bounded_hole": False, "witness": None, "witness_distance": None,
            "hole_area": 0.0, "hole_pixels": 0,
            "n_bounded_components": n_bounded, "inconclusive": sub_threshold}


# ---------------------------------------------------------------------------
# Reduced honeycomb parameters
# ---------------------------------------------------------------------------


_REDUCED_SUPPORT = {(0, 0), (1, 0), (2, 0), (0, 1), (0, 2), (1, 1)}


@dataclass(frozen=True)
class NoSolution:
    """Returned by :func:`match_reduced_params` when no positive solution exists."""

    reason: str


@dataclass(frozen=True)
class ReducedParams:
    """Parameters of the reduced two-periodic honeycomb network.

    ``x1..x4`` are the face weights (with ``x1*x2*x3*x4 == 1``), ``a, b`` the
    positive scales and ``sign_a, sign_b`` the signs with ``alpha = sign_a*a``
    and ``beta = sign_b*b``.  Values are Fractions when rational, otherwise
    :class:`QuadraticNumber` (exact) or floats (numeric fallback).
    """

    x1: Scalar
    x2: Scalar
    x3: Scalar
    x4: Scalar
    a: Scalar
    b: Scalar
    sign_a: int
    sign_b: int

    def __post_init__(self) -> None:
        if self.sign_a not in (-1, 1) or self.sign_b not in (-1, 1):
            raise ValueError("signs must be +-1")
        for name in ("x1", "x2", "x3", "x4", "a", "b"):
            value = getattr(self, name)
            if _scalar_sign(value) <= 0:
                raise ValueError(f"{name} must be positive")
        prod = self.x1 * self.x2 * self.x3 * self.x4
        if isinstance(prod, float):
            if abs(prod - 1.0) > 1e-9:
                raise ValueError("x1*x2*x3*x4 must equal 1")
        elif prod != 1:
            raise ValueError("x1*x2*x3*x4 must equal 1")

    @property
    def alpha(self) -> Scalar:
        return self.sign_a * self.a

    @property
    def beta(self) -> Scalar:
        return self.sign_b * self.b

    def as_floats(self) -> dict[str, float]:
        out = {name: float(getattr(self, name))
               for name in ("x1", "x2", "x3", "x4", "a", "b")}
        out["sign_a"], out["sign_b"] = float(self.sign_a), float(self.sign_b)
        return out


def _scalar_sign(x: Scalar) -> int:
    if isinstance(x, QuadraticNumber):
        return x.sign()
    return (x > 0) - (x < 0)


def reduced_charpoly(params: ReducedParams) -> LaurentPoly2:
    """``P_red(alpha z, beta w)`` as an exact Laurent polynomial.

    With unit scales this is the reduced polynomial itself:
    ``1+(1+X1X3)z+X1X3 z^2+(1+X1X2)w+X1X2 w^2-(X1+X1X2X3)zw``.  Only rational
    parameters admit an exact polynomial; use :func:`verify_reduced_match`
    for algebraic ones.
    """
    values = [params.x1, params.x2, params.x3, params.a, params.b]
    if not all(isinstance(v, Fraction) or isinstance(v, int) for v in values):
        raise TypeError("reduced_charpoly needs rational parameters")
    x1, x2, x3 = params.x1, params.x2, params.x3
    alpha = params.sign_a * params.a
    beta = params.sign_b * params.b
    return LaurentPoly2({
        (0, 0): 1,
        (1, 0): (1 + x1 * x3) * alpha,
        (2, 0): x1 * x3 * alpha * alpha,
        (0, 1): (1 + x1 * x2) * beta,
        (0, 2): x1 * x2 * beta * beta,
        (1, 1): -(x1 + x1 * x2 * x3) * alpha * beta,
    })


def match_reduced_params(P: LaurentPoly2) -> ReducedParams | NoSolution:
    """Recover reduced parameters from a characteristic polynomial.

    Solves ``P == P_red(alpha z, beta w)`` for positive ``X1, X2, X3, a, b``
    and signs.  Writing ``tr A = [z]P`` etc., the eigenvalues of the edge
    matrices factor as ``{alpha, alpha X1 X3}`` for A and
    ``{beta, beta X1 X2}`` for B; deterministically, ``alpha`` is taken to be
    A's eigenvalue of largest magnitude, ``beta`` B's of smallest, and ``X1``
    the larger root of its quadratic.  (All choices lead to the same
    polynomial.)  Results are exact whenever the eigenvalues lie in a common
    quadratic field; otherwise floating point is used.  Returns
    :class:`NoSolution` with a diagnostic if eigenvalues are complex or no
    positive parameter choice exists.
    """
    coeffs: dict[tuple[int, int], Fraction] = {}
    for i, j, c in P.terms():
        if (i, j) not in _REDUCED_SUPPORT:
            return NoSolution(f"monomial z^{i} w^{j} outside the reduced Newton triangle")
        coeffs[(i, j)] = c
    c00 = coeffs.get((0, 0), Fraction(0))
    if c00 == 0:
        return NoSolution("zero constant term")
    tr_a = coeffs.get((1, 0), Fraction(0)) / c00
    det_a = coeffs.get((2, 0), Fraction(0)) / c00
    tr_b = coeffs.get((0, 1), Fraction(0)) / c00
    det_b = coeffs.get((0, 2), Fraction(0)) / c00
    cross = coeffs.get((1, 1), Fraction(0)) / c00
    if det_a == 0 or det_b == 0:
        return NoSolution("a z^2 or w^2 coefficient vanishes (singular edge matrix)")
    disc_a = tr_a * tr_a - 4 * det_a
    disc_b = tr_b * tr_b - 4 * det_b
    if disc_a < 0:
        return NoSolution("complex eigenvalues in the z direction")
    if disc_b < 0:
        return NoSolution("complex eigenvalues in the w direction")
    try:
        return _match_exact(tr_a, det_a, tr_b, det_b, cross, disc_a, disc_b)
    except _FieldMixError:
        return _match_float(tr_a, det_a, tr_b, det_b, cross, disc_a, disc_b)


def _match_exact(tr_a, det_a, tr_b, det_b, cross, disc_a, disc_b):
    root_a = QuadraticNumber.of(disc_a).sqrt()
    root_b = QuadraticNumber.of(disc_b).sqrt()
    sigma_a = 1 if tr_a >= 0 else -1
    sigma_b = 1 if tr_b >= 0 else -1
    alpha = (QuadraticNumber.of(tr_a) + sigma_a * root_a) / 2
    beta = (QuadraticNumber.of(tr_b) - sigma_b * root_b) / 2
    p = QuadraticNumber.of(det_a) / (alpha * alpha)
    q = QuadraticNumber.of(det_b) / (beta * beta)
    s = -QuadraticNumber.of(cross) / (alpha * beta)
    disc_x = s * s - 4 * p * q
    if disc_x.sign() < 0:
        return NoSolution("no real solution for X1")
    root_x = disc_x.sqrt()
    if root_x is None:
        raise _FieldMixError("X1 discriminant has no exact square root")
    x1 = (s + root_x) / 2
    if x1.sign() == 0:
        return NoSolution("degenerate X1 = 0")
    x2 = q / x1
    x3 = p / x1
    if min(x1.sign(), x2.sign(), x3.sign()) <= 0:
        return NoSolution("no positive parameter choice exists")
    x4 = (x1 * x2 * x3).inverse()
    return ReducedParams(
        x1=_demote(x1), x2=_demote(x2), x3=_demote(x3), x4=_demote(x4),
        a=_demote(abs(alpha)), b=_demote(abs(beta)),
        sign_a=alpha.sign(), sign_b=beta.sign(),
    )


def _match_float(tr_a, det_a, tr_b, det_b, cross, disc_a, disc_b):
    tr_a, det_a, tr_b, det_b, cross = map(float, (tr_a, det_a, tr_b, det_b, cross))
    root_a, root_b = math.sqrt(float(disc_a)), math.sqrt(float(disc_b))
    sigma_a = 1 if tr_a >= 0 else -1
    sigma_b = 1 if tr_b >= 0 else -1
    alpha = (tr_a + sigma_a * root_a) / 2
    beta = (tr_b - sigma_b * root_b) / 2
    p = det_a / alpha**2
    q = det_b / beta**2
    s = -cross / (alpha * beta)
    disc_x = s * s - 4 * p * q
    if disc_x < 0:
        if disc_x < -1e-12 * max(1.0, s * s):
            return NoSolution("no real solution for X1")
        disc_x = 0.0
    x1 = (s + math.sqrt(disc_x)) / 2
    if x1 == 0:
        return NoSolution("degenerate X1 = 0")
    x2, x3 = q / x1, p / x1
    if min(x1, x2, x3) <= 0:
        return NoSolution("no positive parameter choice exists")
    return ReducedParams(
        x1=x1, x2=x2, x3=x3, x4=1.0 / (x1 * x2 * x3),
        a=abs(alpha), b=abs(beta),
        sign_a=1 if alpha > 0 else -1, sign_b=1 if beta > 0 else -1,
    )


def verify_reduced_match(P: LaurentPoly2, params: ReducedParams,
                         tol: float = 1e-9) -> bool:
    """Check ``P == P_red(alpha z, beta w)`` coefficient by coefficient.

    Exact when the parameters are rational or quadratic numbers; for float
    parameters the comparison is relative to ``tol``.
    """
    x1, x2, x3 = params.x1, params.x2, params.x3
    alpha, beta = params.alpha, params.beta
    exact = not any(isinstance(v, float) for v in (x1, x2, x3, params.a, params.b))
    one = QuadraticNumber.of(1) if exact else 1.0
    lift = (lambda v: QuadraticNumber._lift(v)) if exact else float
    x1, x2, x3, alpha, beta = map(lift, (x1, x2, x3, alpha, beta))
    target = {
        (0, 0): one,
        (1, 0): (one + x1 * x3) * alpha,
        (2, 0): x1 * x3 * alpha * alpha,
        (0, 1): (one + x1 * x2) * beta,
        (0, 2): x1 * x2 * beta * beta,
        (1, 1): -(x1 + x1 * x2 * x3) * alpha * beta,
    }
    got = {(i, j): c for i, j, c in P.terms()}
    if set(got) - set(target):
        return False
    for key, want in target.items():
        have = got.get(key, Fraction(0))
        if exact:
            try:
                if QuadraticNumber._lift(have) != want:
                    return False
            except _FieldMixError:
                return False
        else:
            if abs(float(have) - float(want)) > tol * max(1.0, abs(float(want))):
                return False
    return True


def realize_reduced(params: ReducedParams) -> tuple[Mat, Mat]:
    """Edge matrices ``(A, B)`` whose characteristic polynomial is the one
    of the given reduced parameters.

    Uses the normal form ``A = diag(alpha, alpha p)`` with ``p = X1 X3`` and
    solves linearly for ``B`` with ``B[0][1] = 1``; requires rational
    parameters and ``X1 X3 != 1``.
    """
    for name in ("x1", "x2", "x3", "a", "b"):
        if not isinstance(getattr(params, name), (Fraction, int)):
            raise TypeError("realize_reduced needs rational parameters")
    alpha = Fraction(params.sign_a * params.a)
    beta = Fraction(params.sign_b * params.b)
    p = Fraction(params.x1 * params.x3)
    q = Fraction(params.x1 * params.x2)
    if p == 1:
        raise ValueError("the diagonal normal form needs X1*X3 != 1")
    tr_b = beta * (1 + q)
    det_b = beta * beta * q
    cross = -(params.x1 + params.x1 * params.x2 * params.x3) * alpha * beta
    b22 = (cross - alpha * p * tr_b) / (alpha * (1 - p))
    b11 = tr_b - b22
    b21 = b11 * b22 - det_b
    A = mat([[alpha, 0], [0, alpha * p]])
    B = mat([[b11, 1], [b21, b22]])
    return A, B


# ---------------------------------------------------------------------------
# Positivity of honeycomb 2-web traces
# ---------------------------------------------------------------------------


def _eigen_report(m: Mat) -> dict:
    tr = m[0][0] + m[1][1]
    dt = det(m)
    disc = tr * tr - 4 * dt
    if disc < 0:
        pattern = "complex"
        approx = None
        exact = None
    else:
        rq = QuadraticNumber.of(disc).sqrt()
        half = QuadraticNumber.of(Fraction(1, 2))
        lo = _demote((QuadraticNumber.of(tr) - rq) * half)
        hi = _demote((QuadraticNumber.of(tr) + rq) * half)
        exact = (lo, hi)
        approx = (float(lo), float(hi))
        if dt < 0:
            pattern = "mixed"
        elif dt == 0:
            pattern = "singular"
        elif tr > 0:
            pattern = "positive"
        elif tr < 0:
            pattern = "negative"
        else:
            pattern = "singular"  # tr == 0 and dt > 0 is impossible with disc >= 0
    return {"trace": tr, "det": dt, "disc": disc, "pattern": pattern,
            "exact": exact, "approx": approx}


def positivity_test(h: HoneycombSpec) -> dict:
    """Exact sufficient conditions for all 2-web traces to be positive.

    ``PositiveByTheorem``: among A, B and AB^{-1}, two have positive real
    eigenvalues and one negative, or all three negative.
    ``PositiveByTriangular`` (conjectural): A and B are simultaneously
    triangularizable (their commutator is singular) with real eigenvalues and
    positive determinants.  All sign decisions use exact rational arithmetic.
    """
    if det(h.A) == 0 or det(h.B) == 0:
        raise ValueError("positivity test needs invertible A and B")
    ab_inv = mat_mul(h.A, inverse(h.B))
    eigen = {
        "A": _eigen_report(h.A),
        "B": _eigen_report(h.B),
        "AB_inv": _eigen_report(ab_inv),
    }
    patterns = [eigen[k]["pattern"] for k in ("A", "B", "AB_inv")]
    pos, neg = patterns.count("positive"), patterns.count("negative")
    if (pos == 2 and neg == 1) or neg == 3:
        return {
            "verdict": "PositiveByTheorem",
            "conjectural": False,
            "eigenvalues": eigen,
            "witness": {"pattern": dict(zip(("A", "B", "AB_inv"), patterns))},
        }
    commutator = mat_sub(mat_mul(h.A, h.B), mat_mul(h.B, h.A))
    if (det(commutator) == 0 and det(h.A) > 0 and det(h.B) > 0
            and eigen["A"]["disc"] >= 0 and eigen["B"]["disc"] >= 0):
        return {
            "verdict": "PositiveByTriangular",
            "conjectural": True,
            "eigenvalues": eigen,
            "witness": {"commutator_det": det(commutator),
                        "dets": {"A": det(h.A), "B": det(h.B)}},
        }
    return {"verdict": "Unknown", "conjectural": False,
            "eigenvalues": eigen, "witness": None}


def brute_force_2web_positivity(h: HoneycombSpec, patch: HexPatch,
                                cap: int | None = None) -> dict:
    """Enumerate every 2-multiweb on the patch and check trace positivity.

    Returns the minimum trace, the multiweb achieving it (as an edge
    multiplicity dictionary) and the number of webs checked.  The patch must
    be color-balanced so that 2-multiwebs exist.
    """
    g = patch.graph
    black_total = sum(v.n for v in g.vertices if v.color == BLACK)
    white_total = sum(v.n for v in g.vertices if v.color == WHITE)
    if black_total != white_total:
        raise ValueError("patch is not color-balanced; it has no 2-multiwebs")
    conn = patch_connection(patch, h.A, h.B)
    min_trace = None
    witness = None
    checked = 0
    for web in iter_multiwebs(g, cap):
        value = trace_multiweb(web, conn)
        checked += 1
        if min_trace is None or value < min_trace:
            min_trace, witness = value, web.as_dict()
    if checked == 0:
        raise ValueError("patch admits no 2-multiwebs")
    return {
        "all_positive": min_trace > 0,
        "min_trace": min_trace,
        "witness": witness,
        "webs_checked": checked,
    }
