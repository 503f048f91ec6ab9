"""Kasteleyn signs and block Kasteleyn matrices.

A sign assignment gives every edge +1 or -1 so that around each bounded face
of length 2L with k cilia pointing in, the product of signs is (-1)^(L+1+k).
Signs are found by linear algebra over GF(2): one parity constraint per face
(all faces but an exempt one, playing the role of the outer face), solved by
Gaussian elimination on bitmasks.

The block Kasteleyn matrix has one row per white color, one column per black
color; the block of an edge is its sign times its connection matrix, and on
the torus also a monomial z^p w^q recording the homology class.  Its
determinant expands the weighted multiweb count.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .connection import Connection, trace_multiweb
from .graph import BLACK, PLANE, TORUS, Face, PlanarGraph, trace_faces
from .laurent import LaurentPoly2, det_laurent
from .linalg import det as rational_det
from .webs import Multiweb, enumerate_multiwebs


class SignError(RuntimeError):
    """No sign assignment satisfies the requested parity constraints."""


class InfeasibleError(ValueError):
    """The graph cannot carry any multiweb (e.g. unbalanced multiplicities)."""


def face_sign_target(face: Face) -> int:
    """Required parity of minus signs around a face: product = (-1)^(L+1+k)."""
    half = face.length // 2
    return (half + 1 + face.cilia) % 2


def check_signs(
    g: PlanarGraph, signs: dict[int, int], exempt: int | None = None
) -> list[str]:
    """Violated face constraints (face index and parity), empty if none.

    `exempt` skips one face index (the outer face); pass None to check all.
    """
    problems = []
    for idx, face in enumerate(trace_faces(g)):
        if idx == exempt:
            continue
        minus = sum(1 for e in face.edge_ids() if signs[e] < 0) % 2
        if minus != face_sign_target(face):
            problems.append(
                f"face {idx} (length {face.length}, cilia {face.cilia}): "
                f"sign product {(-1) ** minus}, expected {(-1) ** face_sign_target(face)}"
            )
    return problems


def _solve_gf2(rows: list[tuple[int, int]], n_vars: int) -> int:
    """Solve a GF(2) system given as (bitmask, rhs) rows; free vars are 0.
    Returns the solution as a bitmask.  Raises SignError if inconsistent."""
    pivots: dict[int, tuple[int, int]] = {}  # pivot bit position -> reduced row
    for mask, rhs in rows:
        for bit, (pmask, prhs) in pivots.items():
            if mask >> bit & 1:
                mask ^= pmask
                rhs ^= prhs
        if mask == 0:
            if rhs:
                raise SignError("parity constraints are inconsistent")
            continue
        bit = mask.bit_length() - 1
        for other_bit, (pmask, prhs) in list(pivots.items()):
            if pmask >> bit & 1:
                pivots[other_bit] = (pmask ^ mask, prhs ^ rhs)
        pivots[bit] = (mask, rhs)
    solution = 0
    for bit, (pmask, prhs) in pivots.items():
        if prhs:
            solution |= 1 << bit
    return solution


def assign_signs(
    g: PlanarGraph,
    exempt: int | None = None,
    extra_constraints: list[tuple[list[int], int]] | None = None,
) -> dict[int, int]:
    """A sign assignment satisfying the face rule on all faces but one.

    The exempt face (by index into trace_faces; default: the longest face,
    which in the intended drawings is the outer one) plays the role of the
    unbounded face.  Any choice yields a valid Kasteleyn system: exempting a
    face re-embeds the graph with that face outermost, and the identity with
    the trace sum holds for every embedding.

    extra_constraints is a list of (edge id list, parity) pairs imposed on
    top of the face rule (used for boundary gauge fixing).
    """
    if g.surface == TORUS:
        raise ValueError("sign construction applies to disk/plane graphs only")
    faces = trace_faces(g)
    if exempt is None and faces:
        longest = max(f.length for f in faces)
        exempt = next(i for i, f in enumerate(faces) if f.length == longest)
    rows = []
    for idx, face in enumerate(faces):
        if idx == exempt:
            continue
        mask = 0
        for e in face.edge_ids():
            mask ^= 1 << e  # an edge seen twice from the same face cancels
        rows.append((mask, face_sign_target(face)))
    for edge_ids, parity in extra_constraints or []:
        mask = 0
        for e in edge_ids:
            mask ^= 1 << e
        rows.append((mask, parity % 2))
    solution = _solve_gf2(rows, len(g.edges))
    signs = {e.id: (-1 if solution >> e.id & 1 else 1) for e in g.edges}
    leftover = check_signs(g, signs, exempt)
    if leftover:
        raise SignError("sign solve left violations: " + "; ".join(leftover))
    return signs


def loop_monodromy(signs: dict[int, int], cycle_edges: list[int]) -> int:
    out = 1
    for e in cycle_edges:
        out *= signs[e]
    return out


# ------------------------------------------------------------------ matrices


@dataclass
class BlockKasteleyn:
    graph: PlanarGraph
    signs: dict[int, int]
    row_index: list[tuple[int, int]]  # (white id, color 1..n_w) per scalar row
    col_index: list[tuple[int, int]]  # (black id, color 1..n_b)
    entries: list[list]  # Fraction, or LaurentPoly2 on the torus
    laurent: bool

    def shape(self) -> tuple[int, int]:
        return (len(self.row_index), len(self.col_index))

    def block(self, wid: int, bid: int) -> list[list]:
        rows = [i for i, (w, _) in enumerate(self.row_index) if w == wid]
        cols = [j for j, (b, _) in enumerate(self.col_index) if b == bid]
        return [[self.entries[i][j] for j in cols] for i in rows]


def build_block_kasteleyn(
    g: PlanarGraph, conn: Connection, signs: dict[int, int]
) -> BlockKasteleyn:
    conn.validate_for(g)
    laurent = g.surface == TORUS
    whites = sorted(v.id for v in g.vertices if v.color != BLACK)
    blacks = sorted(v.id for v in g.vertices if v.color == BLACK)
    row_index = [(w, c + 1) for w in whites for c in range(g.vertices[w].n)]
    col_index = [(b, c + 1) for b in blacks for c in range(g.vertices[b].n)]
    row_of = {rc: i for i, rc in enumerate(row_index)}
    col_of = {bc: j for j, bc in enumerate(col_index)}
    zero = LaurentPoly2() if laurent else Fraction(0)
    entries = [[zero for _ in col_index] for _ in row_index]
    for e in g.edges:
        phi = conn.matrices[e.id]
        sign = signs[e.id]
        if sign not in (1, -1):
            raise ValueError(f"sign of edge {e.id} must be +/-1")
        p, q = e.homology
        for i in range(g.vertices[e.white].n):
            for j in range(g.vertices[e.black].n):
                val = sign * phi[i][j]
                if not val:
                    continue
                term = LaurentPoly2({(p, q): val}) if laurent else val
                r = row_of[(e.white, i + 1)]
                c = col_of[(e.black, j + 1)]
                entries[r][c] = entries[r][c] + term
    return BlockKasteleyn(g, signs, row_index, col_index, entries, laurent)


def det_expanded(K: BlockKasteleyn):
    """Exact determinant of the expanded Kasteleyn matrix.

    Returns a Fraction, or a LaurentPoly2 for torus matrices.  A non-square
    matrix means total black and white multiplicities differ, so no multiweb
    exists at all.
    """
    rows, cols = K.shape()
    if rows != cols:
        raise InfeasibleError(
            f"Kasteleyn matrix is {rows}x{cols}: black and white multiplicities do not balance"
        )
    if K.laurent:
        return det_laurent(K.entries)
    return rational_det(tuple(tuple(row) for row in K.entries))


def verify_main_theorem(
    g: PlanarGraph,
    conn: Connection,
    signs: dict[int, int] | None = None,
    cap: int | None = None,
    method: str = "minors",
) -> dict:
    """Check det K = s * (sum of multiweb traces) with a single sign s.

    Returns {"lhs": det, "rhs": trace sum, "sign": s or None, "ok": bool,
    "webs": number of multiwebs}.
    """
    if g.boundary:
        raise ValueError("the determinant identity is verified on closed graphs")
    if g.surface == TORUS:
        raise ValueError("on the torus use det_expanded and compare coefficients")
    if signs is None:
        signs = assign_signs(g)
    K = build_block_kasteleyn(g, conn, signs)
    try:
        lhs = det_expanded(K)
    except InfeasibleError:
        lhs = Fraction(0)
    webs = enumerate_multiwebs(g, cap)
    rhs = Fraction(0)
    for m in webs:
        rhs += trace_multiweb(m, conn, method=method)
    if rhs:
        s = lhs / rhs
        ok = s in (1, -1)
    else:
        s = None
        ok = lhs == 0
    return {"lhs": lhs, "rhs": rhs, "sign": s if ok else None, "ok": ok, "webs": len(webs)}
