"""Connections and exact multiweb traces via the coloring expansion.

A connection attaches to each edge bw a rational matrix of shape n_w x n_b
(a linear map from the black fiber to the white fiber).  The trace of a
multiweb sums, over all admissible colorings of half-edges, a product of
vertex permutation signs and per-edge determinants of submatrices.

Two independent evaluation routes are provided and must agree:

* ``minors`` (default): colors are chosen per edge as blocks -- subsets at
  interior vertices, ordered slot tuples at boundary vertices -- and each
  edge contributes one determinant of the corresponding submatrix.
* ``split``: every edge of multiplicity m is replaced by m parallel copies,
  the raw single-color expansion is summed on the split graph, and the total
  is divided by the product of the m! symmetry factors.

The sum is evaluated as a tensor-network contraction vertex by vertex with a
frontier of partially colored edges, so graphs far larger than naive
enumeration could handle remain cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations, product
from math import factorial
from typing import Iterator

from .graph import BLACK, WHITE, PlanarGraph, Vertex
from .linalg import Mat, SingularMatrixError, det, mat, mat_mul, shape, submatrix
from .webs import Multiweb

BoundaryInputs = dict[int, dict[tuple[int, ...], Fraction]]


@dataclass(frozen=True)
class Connection:
    matrices: dict[int, Mat]

    def matrix(self, eid: int) -> Mat:
        return self.matrices[eid]

    def validate_for(self, g: PlanarGraph) -> None:
        for e in g.edges:
            m = self.matrices.get(e.id)
            if m is None:
                raise ValueError(f"no matrix for edge {e.id}")
            want = (g.vertices[e.white].n, g.vertices[e.black].n)
            if shape(m) != want:
                raise ValueError(
                    f"edge {e.id}: matrix shape {shape(m)} != (n_white, n_black) = {want}"
                )


def connection(matrices: dict[int, object]) -> Connection:
    return Connection({eid: mat(m) for eid, m in matrices.items()})


def basis_tensor(*word: int) -> dict[tuple[int, ...], Fraction]:
    """The boundary input that is 1 on the given color word and 0 elsewhere."""
    return {tuple(word): Fraction(1)}


def gauge_transform(c: Connection, g: PlanarGraph, vid: int, gmat) -> Connection:
    """Right-multiply by g at a black vertex, left-multiply at a white one."""
    gmat = mat(gmat)
    v = g.vertices[vid]
    n, m = shape(gmat)
    if n != m or n != v.n:
        raise ValueError(f"gauge at vertex {vid} must be {v.n}x{v.n}")
    if det(gmat) == 0:
        raise SingularMatrixError(f"gauge matrix at vertex {vid} is singular")
    out = dict(c.matrices)
    for eid in v.rotation:
        out[eid] = mat_mul(out[eid], gmat) if v.color == BLACK else mat_mul(gmat, out[eid])
    return Connection(out)


# ------------------------------------------------------------- combinatorics


def perm_sign(word: tuple[int, ...]) -> int:
    inv = 0
    for i in range(len(word)):
        for j in range(i + 1, len(word)):
            if word[i] > word[j]:
                inv += 1
    return -1 if inv % 2 else 1


def ordered_set_partitions(
    colors: tuple[int, ...], sizes: tuple[int, ...]
) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All ways to split `colors` into ordered blocks of the given sizes;
    blocks come out ascending."""
    if not sizes:
        yield ()
        return
    head_size = sizes[0]
    for head in combinations(colors, head_size):
        chosen = set(head)
        rest = tuple(c for c in colors if c not in chosen)
        for tail in ordered_set_partitions(rest, sizes[1:]):
            yield (head,) + tail


def rotation_from_cilium(v: Vertex) -> tuple[int, ...]:
    """Incident edges in reading order: the stored rotation, started at the
    cilium when there is one."""
    r = v.rotation
    if v.cilium is None or v.cilium == 0:
        return r
    return r[v.cilium :] + r[: v.cilium]


# ------------------------------------------------------------- the engine


def _vertex_options(g, mult, inputs, v):
    """All (coefficient, {edge id: color tuple}) choices at one vertex.

    Interior vertices contribute their permutation sign; boundary vertices
    contribute the input tensor coefficient of the word being read off.
    """
    order = rotation_from_cilium(v)
    sizes = tuple(mult[e] for e in order)
    if not g.is_boundary(v.id):
        colors = tuple(range(1, v.n + 1))
        if sum(sizes) != v.n:
            return []
        out = []
        for blocks in ordered_set_partitions(colors, sizes):
            word = tuple(c for block in blocks for c in block)
            sign = Fraction(perm_sign(word))
            out.append((sign, dict(zip(order, blocks))))
        return out
    d = g.boundary[v.id]
    if sum(sizes) != d:
        return []
    tensor = inputs[v.id]
    out = []
    for word, coeff in tensor.items():
        if len(word) != d:
            raise ValueError(f"boundary input at vertex {v.id} has arity {len(word)}, expected {d}")
        if not coeff:
            continue
        if any(not 1 <= c <= v.n for c in word):
            raise ValueError(f"boundary input color out of range at vertex {v.id}")
        blocks = {}
        pos = 0
        for e, k in zip(order, sizes):
            blocks[e] = tuple(word[pos : pos + k])
            pos += k
        out.append((Fraction(coeff), blocks))
    return out


def _coloring_sum(g: PlanarGraph, mult, conn: Connection, inputs: BoundaryInputs) -> Fraction:
    """Contract the coloring sum, processing vertices in id order and keeping
    a frontier of edges colored on one side only."""
    det_cache: dict[tuple, Fraction] = {}
    fact = {e.id: factorial(mult[e.id]) for e in g.edges}

    def edge_factor(eid: int, s_colors: tuple[int, ...], t_colors: tuple[int, ...]) -> Fraction:
        key = (eid, s_colors, t_colors)
        cached = det_cache.get(key)
        if cached is not None:
            return cached
        e = g.edges[eid]
        phi = conn.matrices[eid]
        b_bdy = g.is_boundary(e.black)
        w_bdy = g.is_boundary(e.white)
        rows = [t - 1 for t in t_colors]
        cols = [s - 1 for s in s_colors]
        if b_bdy and w_bdy:
            val = Fraction(1)
            for r, c in zip(rows, cols):
                val *= phi[r][c]
        else:
            val = det(submatrix(phi, rows, cols))
        if b_bdy or w_bdy:
            val /= fact[eid]
        det_cache[key] = val
        return val

    # states: frontier (sorted tuple of (edge id, colors at processed end)) -> sum
    states: dict[tuple, Fraction] = {(): Fraction(1)}
    for v in g.vertices:
        options = _vertex_options(g, mult, inputs, v)
        if not options:
            return Fraction(0)
        new_states: dict[tuple, Fraction] = {}
        for key, acc in states.items():
            frontier = dict(key)
            for coeff, blocks in options:
                value = acc * coeff
                if not value:
                    continue
                nf = dict(frontier)
                dead = False
                for eid, colors in blocks.items():
                    other = g.other_end(eid, v.id)
                    if eid in nf:
                        other_colors = nf.pop(eid)
                        if v.color == BLACK:
                            f = edge_factor(eid, colors, other_colors)
                        else:
                            f = edge_factor(eid, other_colors, colors)
                        value *= f
                        if not value:
                            dead = True
                            break
                    else:
                        nf[eid] = colors
                if dead:
                    continue
                nk = tuple(sorted(nf.items()))
                new_states[nk] = new_states.get(nk, Fraction(0)) + value
        states = {k: v for k, v in new_states.items() if v}
        if not states:
            return Fraction(0)
    return states.get((), Fraction(0))


# ------------------------------------------------------------- split route


def split_web(m: Multiweb, conn: Connection) -> tuple[PlanarGraph, Multiweb, Connection]:
    """Replace every edge of multiplicity k by k adjacent parallel copies
    (dropping unused edges); the returned multiweb is identically 1."""
    g = m.graph
    copies: dict[int, list[int]] = {}
    new_edges = []
    new_mats = {}
    nid = 0
    for e in g.edges:
        ids = []
        for _ in range(m[e.id]):
            new_edges.append(replace(e, id=nid))
            new_mats[nid] = conn.matrices[e.id]
            ids.append(nid)
            nid += 1
        copies[e.id] = ids
    new_vertices = []
    for v in g.vertices:
        rot: list[int] = []
        cil = v.cilium
        new_cil = None
        for i, e in enumerate(v.rotation):
            if cil is not None and i == cil:
                new_cil = len(rot)
            rot.extend(copies[e])
        if cil is not None and new_cil is None:
            new_cil = len(rot)  # cilium index == len(rotation) wraps to 0
        if new_cil is not None and rot:
            new_cil %= len(rot)
        new_vertices.append(replace(v, rotation=tuple(rot), cilium=new_cil))
    split_graph = PlanarGraph(new_vertices, new_edges, g.surface, dict(g.boundary))
    web = Multiweb(split_graph, tuple([1] * len(new_edges)))
    return split_graph, web, Connection(new_mats)


# ------------------------------------------------------------- public API


def trace_multiweb(
    m: Multiweb,
    conn: Connection,
    inputs: BoundaryInputs | None = None,
    method: str = "minors",
):
    """Exact trace of a multiweb.

    For closed graphs returns a Fraction.  For boundary graphs, `inputs`
    maps each boundary vertex to a sparse tensor {color word: coefficient};
    when omitted, a dictionary of traces indexed by boundary color words
    (one word per boundary vertex, in vertex-id order) is returned instead.
    """
    g = m.graph
    m.check()
    conn.validate_for(g)
    if g.boundary:
        if inputs is None:
            return _symbolic_boundary_trace(m, conn, method)
        missing = [v for v in g.boundary if v not in inputs]
        if missing:
            raise ValueError(f"missing boundary inputs for vertices {missing}")
    elif inputs:
        raise ValueError("boundary inputs supplied for a closed graph")
    else:
        inputs = {}

    if method == "minors":
        return _coloring_sum(g, m.multiplicities, conn, inputs)
    if method == "split":
        sg, sweb, sconn = split_web(m, conn)
        total = _coloring_sum(sg, sweb.multiplicities, sconn, inputs)
        denom = 1
        for k in m.multiplicities:
            denom *= factorial(k)
        return total / denom
    raise ValueError(f"unknown trace method {method!r}")


def _symbolic_boundary_trace(m: Multiweb, conn: Connection, method: str):
    g = m.graph
    bdy = sorted(g.boundary)
    words_per_vertex = [
        list(product(range(1, g.vertices[v].n + 1), repeat=g.boundary[v])) for v in bdy
    ]
    out = {}
    for combo in product(*words_per_vertex):
        inputs = {v: {word: Fraction(1)} for v, word in zip(bdy, combo)}
        val = trace_multiweb(m, conn, inputs, method)
        if val:
            out[tuple(combo)] = val
    return out
