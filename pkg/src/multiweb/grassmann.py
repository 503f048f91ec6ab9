"""Plabic networks: matchings, perfect orientations, boundary measurements.

A plabic network is a scalar-weighted bipartite graph in the disk with
numbered boundary vertices.  Three routes produce points of the Grassmannian
from such a network:

* `matching_pluckers` sums weights of almost perfect matchings grouped by
  covered boundary set (one Plücker coordinate per boundary subset);
* `boundary_measurement` sums weighted directed paths in a perfect
  orientation, with winding signs, via exact transfer-matrix inversion;
* `schur_reduce` eliminates interior rows of a Kasteleyn matrix by a Schur
  complement.

All three agree projectively, which the test-suite uses as a cross-check.
Winding signs need an actual drawing, so networks destined for
`boundary_measurement` carry exact rational coordinates; turning numbers are
computed from them with integer arithmetic only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

from .graph import BLACK, DISK, WHITE, Edge, PlanarGraph, Vertex
from .kasteleyn import BlockKasteleyn, InfeasibleError
from .linalg import (
    Mat,
    SingularMatrixError,
    det,
    mat,
    maximal_minors,
    rank,
    solve,
    transpose,
)

Point = tuple[Fraction, Fraction]


class DrawingError(ValueError):
    """The drawing data is unusable (missing coordinates, coinciding
    directions at a vertex, or rotations inconsistent with the coordinates)."""


class SingularityError(RuntimeError):
    """Path sums diverge: some directed cycle has total weight exactly 1."""


class NonGenericError(ValueError):
    """A chamber minor needed for weight recovery vanishes."""


class ReductionError(RuntimeError):
    """Schur reduction failed; the chosen matching gives a singular block."""


# ----------------------------------------------------------------- networks


@dataclass
class PlabicNetwork:
    """A disk graph with scalar edge weights and ordered boundary vertices.

    Weights are attached to the black-to-white orientation of each edge;
    traversing an edge white-to-black inverts the weight.  `boundary_order`
    lists boundary vertex ids counterclockwise; position r in this list is
    boundary index r+1 (boundary indices are 1-based throughout).
    """

    graph: PlanarGraph
    weights: dict[int, Fraction]
    boundary_order: tuple[int, ...]
    positions: dict[int, Point] = field(default_factory=dict)

    def boundary_index(self, vid: int) -> int:
        return self.boundary_order.index(vid) + 1

    def boundary_vertex(self, index: int) -> int:
        return self.boundary_order[index - 1]

    def validate(self) -> list[str]:
        problems = self.graph.validate()
        if sorted(self.boundary_order) != sorted(self.graph.boundary):
            problems.append("boundary_order must list exactly the boundary vertices")
        for e in self.graph.edges:
            if not self.weights.get(e.id):
                problems.append(f"edge {e.id} needs a nonzero weight")
        for v in self.graph.vertices:
            if v.n != 1:
                problems.append(f"vertex {v.id}: plabic networks are scalar (n=1)")
        return problems

    def check_valid(self) -> None:
        problems = self.validate()
        if problems:
            raise ValueError("invalid network: " + "; ".join(problems))


def _as_point(xy: Sequence) -> Point:
    x, y = xy
    return (Fraction(x), Fraction(y))


def _angle_key(direction: Point):
    """Sort key for counterclockwise angular order starting at the +x axis."""
    x, y = direction
    upper = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    return (upper, _CcwFrom(direction))


class _CcwFrom:
    """Comparator wrapper: within one half-plane, u precedes v iff u x v > 0."""

    def __init__(self, v: Point):
        self.v = v

    def __lt__(self, other: "_CcwFrom") -> bool:
        cr = self.v[0] * other.v[1] - self.v[1] * other.v[0]
        if cr == 0:
            raise DrawingError(f"coinciding edge directions {self.v} in the drawing")
        return cr > 0


def build_network(
    colors: Sequence[str],
    positions: Sequence[Sequence],
    edge_pairs: Sequence[tuple[int, int]],
    weights: Sequence,
    boundary_order: Sequence[int],
) -> PlabicNetwork:
    """Assemble a plabic network from a straight-line drawing.

    Rotations are read off the coordinates: the counterclockwise angular
    order of the incident edges around each vertex.  Edge ids follow the
    order of `edge_pairs`; each pair may name its endpoints in either order.
    """
    pts = [_as_point(p) for p in positions]
    incident: list[list[int]] = [[] for _ in colors]
    edges = []
    for eid, (u, v) in enumerate(edge_pairs):
        if colors[u] == BLACK:
            b, w = u, v
        else:
            b, w = v, u
        if colors[b] != BLACK or colors[w] != WHITE:
            raise ValueError(f"edge {eid} must join a black and a white vertex")
        edges.append(Edge(eid, b, w, (0, 0)))
        incident[u].append(eid)
        incident[v].append(eid)
    vertices = []
    for vid, color in enumerate(colors):
        dirs = {}
        for eid in incident[vid]:
            e = edges[eid]
            oid = e.white if e.black == vid else e.black
            dirs[eid] = (pts[oid][0] - pts[vid][0], pts[oid][1] - pts[vid][1])
        ccw = sorted(incident[vid], key=lambda eid: _angle_key(dirs[eid]))
        rotation = tuple(ccw) if color == BLACK else tuple(reversed(ccw))
        vertices.append(Vertex(vid, color, 1, rotation, None))
    boundary = {vid: 1 for vid in boundary_order}
    g = PlanarGraph(vertices, edges, DISK, boundary)
    g.check_valid()
    net = PlabicNetwork(
        g,
        {eid: Fraction(w) for eid, w in enumerate(weights)},
        tuple(boundary_order),
        {vid: pts[vid] for vid in range(len(colors))},
    )
    net.check_valid()
    return net


# ----------------------------------------------------------------- matchings


def almost_perfect_matchings(net: PlabicNetwork) -> Iterator[frozenset[int]]:
    """All edge sets covering every interior vertex exactly once and each
    boundary vertex at most once, in a deterministic order."""
    g = net.graph
    interior = [v.id for v in g.vertices if v.id not in g.boundary]
    incident: dict[int, list[int]] = {v.id: [] for v in g.vertices}
    for e in g.edges:
        incident[e.black].append(e.id)
        incident[e.white].append(e.id)
    covered = [False] * len(g.vertices)
    chosen: list[int] = []

    def rec() -> Iterator[frozenset[int]]:
        vid = next((v for v in interior if not covered[v]), None)
        if vid is None:
            yield frozenset(chosen)
            return
        covered[vid] = True
        for eid in incident[vid]:
            oid = g.other_end(eid, vid)
            if covered[oid]:
                continue
            covered[oid] = True
            chosen.append(eid)
            yield from rec()
            covered[oid] = False
            chosen.pop()
        covered[vid] = False

    yield from rec()


def matching_boundary(net: PlabicNetwork, matching: frozenset[int]) -> tuple[int, ...]:
    """Covered boundary indices of a matching, sorted ascending."""
    g = net.graph
    out = []
    for eid in matching:
        e = g.edges[eid]
        for vid in (e.black, e.white):
            if vid in g.boundary:
                out.append(net.boundary_index(vid))
    return tuple(sorted(out))


def matching_pluckers(net: PlabicNetwork) -> dict[tuple[int, ...], Fraction]:
    """Weight generating function of almost perfect matchings, grouped by
    covered boundary set.  These are the Plücker coordinates of the network."""
    out: dict[tuple[int, ...], Fraction] = {}
    for matching in almost_perfect_matchings(net):
        key = matching_boundary(net, matching)
        weight = Fraction(1)
        for eid in matching:
            weight *= net.weights[eid]
        out[key] = out.get(key, Fraction(0)) + weight
    sizes = {len(k) for k in out}
    if len(sizes) > 1:
        raise InfeasibleError("matchings cover boundary sets of unequal size")
    return out


# -------------------------------------------------------------- orientations


@dataclass(frozen=True)
class PerfectOrientation:
    """Edge directions in which every interior black vertex has in-degree 1
    and every interior white vertex has out-degree 1."""

    matching: frozenset[int]
    direction: dict[int, str]  # edge id -> "bw" (black to white) or "wb"
    sinks: tuple[int, ...]  # covered boundary indices, ascending
    sources: tuple[int, ...]


def orientation_from_matching(
    net: PlabicNetwork, matching: frozenset[int] | set[int]
) -> PerfectOrientation:
    """Direct matched edges white-to-black and the rest black-to-white."""
    matching = frozenset(matching)
    g = net.graph
    direction = {e.id: ("wb" if e.id in matching else "bw") for e in g.edges}
    sinks = matching_boundary(net, matching)
    sources = tuple(i for i in range(1, len(net.boundary_order) + 1) if i not in sinks)
    po = PerfectOrientation(matching, direction, sinks, sources)
    _check_orientation(net, po)
    return po


def _check_orientation(net: PlabicNetwork, po: PerfectOrientation) -> None:
    g = net.graph
    indeg = {v.id: 0 for v in g.vertices}
    outdeg = {v.id: 0 for v in g.vertices}
    for e in g.edges:
        head = e.white if po.direction[e.id] == "bw" else e.black
        tail = e.black if po.direction[e.id] == "bw" else e.white
        indeg[head] += 1
        outdeg[tail] += 1
    for v in g.vertices:
        if v.id in g.boundary:
            continue
        if v.color == BLACK and indeg[v.id] != 1:
            raise ValueError(f"black vertex {v.id} has in-degree {indeg[v.id]}")
        if v.color == WHITE and outdeg[v.id] != 1:
            raise ValueError(f"white vertex {v.id} has out-degree {outdeg[v.id]}")


def find_perfect_orientation(
    net: PlabicNetwork, sinks: tuple[int, ...] | None = None
) -> PerfectOrientation:
    """First perfect orientation in matching order, optionally restricted to a
    given sink set (boundary indices)."""
    for matching in almost_perfect_matchings(net):
        po = orientation_from_matching(net, matching)
        if sinks is None or po.sinks == tuple(sorted(sinks)):
            return po
    raise InfeasibleError("network admits no almost perfect matching" + ("" if sinks is None else f" with sinks {sinks}"))


# ------------------------------------------------------------ measurements


@dataclass(frozen=True)
class GrassmannPoint:
    """A k-plane given by a k x n matrix of full row rank."""

    matrix: Mat

    def __post_init__(self) -> None:
        if rank(self.matrix) != self.k:
            raise ValueError("matrix does not have full row rank")

    @property
    def k(self) -> int:
        return len(self.matrix)

    @property
    def n(self) -> int:
        return len(self.matrix[0])

    @cached_property
    def plucker(self) -> dict[tuple[int, ...], Fraction]:
        """Maximal minors, keyed by ascending 1-based column subsets."""
        return maximal_minors(self.matrix)


def pluckers_proportional(
    p: dict[tuple[int, ...], Fraction], q: dict[tuple[int, ...], Fraction]
) -> bool:
    if set(p) != set(q):
        return False
    pivot = next((key for key in p if p[key] or q[key]), None)
    if pivot is None:
        return True
    if not (p[pivot] and q[pivot]):
        return False
    return all(p[key] * q[pivot] == q[key] * p[pivot] for key in p)


def _cross(u: Point, v: Point) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _generic_ray(directions: list[Point]) -> Point:
    for p, q in [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2), (1, 5), (5, 1)]:
        ray = (Fraction(p), Fraction(q))
        if all(_cross(ray, d) != 0 for d in directions):
            return ray
    # fall back: steeper and steeper rays; finitely many directions, so this ends
    q = 7
    while True:
        ray = (Fraction(1), Fraction(q))
        if all(_cross(ray, d) != 0 for d in directions):
            return ray
        q += 1


def _corner_sign(u: Point, w: Point, ray: Point) -> int:
    """-1 when the turn from travel direction u to w sweeps past `ray`.

    The minor arc from u to w crosses the ray direction at most once; the
    parity of these crossings along a closed walk is the parity of its total
    turning, which is what the winding sign needs.
    """
    cr = _cross(u, w)
    if cr == 0:
        if u[0] * w[0] + u[1] * w[1] > 0:
            return 1  # straight through
        raise DrawingError("u-turn corner: antiparallel travel directions")
    if cr > 0:  # counterclockwise sweep u -> w
        inside = _cross(u, ray) > 0 and _cross(ray, w) > 0
    else:  # clockwise sweep; the swept set is the ccw arc w -> u
        inside = _cross(w, ray) > 0 and _cross(ray, u) > 0
    return -1 if inside else 1


def _validate_drawing(net: PlabicNetwork) -> None:
    g = net.graph
    for v in g.vertices:
        if v.id not in net.positions:
            raise DrawingError(f"vertex {v.id} has no coordinates")
    for v in g.vertices:
        dirs = {}
        for eid in v.rotation:
            oid = g.other_end(eid, v.id)
            px, py = net.positions[v.id]
            qx, qy = net.positions[oid]
            dirs[eid] = (qx - px, qy - py)
        ccw = sorted(v.rotation, key=lambda eid: _angle_key(dirs[eid]))
        want = list(g.ccw_rotation(v.id))
        if len(ccw) > 1:
            start = want.index(ccw[0])
            want = want[start:] + want[:start]
        if ccw != want:
            raise DrawingError(
                f"rotation at vertex {v.id} disagrees with the angular order of the drawing"
            )


def boundary_measurement(
    net: PlabicNetwork, po: PerfectOrientation, check_windings: bool = True
) -> GrassmannPoint:
    """Path-sum boundary measurement matrix of a perfectly oriented network.

    Entry (i, j) for sink index i and source index j sums the weights of all
    directed walks from j to i, signed by winding parity and by the number of
    sinks strictly between i and j.  Cycles contribute convergent geometric
    series, summed exactly by solving the transfer linear system.  Columns at
    sink indices form an identity.
    """
    g = net.graph
    net.check_valid()
    _validate_drawing(net)
    for vid in g.boundary:
        if g.vertices[vid].color != BLACK:
            raise ValueError("boundary vertices must be black for measurements")
        if len(g.vertices[vid].rotation) != 1:
            raise ValueError(f"boundary vertex {vid} must have degree 1")

    tail, head, wt, dirvec = {}, {}, {}, {}
    for e in g.edges:
        if po.direction[e.id] == "bw":
            tail[e.id], head[e.id] = e.black, e.white
            wt[e.id] = net.weights[e.id]
        else:
            tail[e.id], head[e.id] = e.white, e.black
            wt[e.id] = 1 / net.weights[e.id]
        tx, ty = net.positions[tail[e.id]]
        hx, hy = net.positions[head[e.id]]
        dirvec[e.id] = (hx - tx, hy - ty)
    out_darts: dict[int, list[int]] = {v.id: [] for v in g.vertices}
    for e in g.edges:
        out_darts[tail[e.id]].append(e.id)
    ray = _generic_ray(list(dirvec.values()))

    n_edges = len(g.edges)
    rows = []
    for d in range(n_edges):
        row = [Fraction(0)] * n_edges
        row[d] = Fraction(1)
        for dn in out_darts[head[d]]:
            row[dn] -= wt[d] * _corner_sign(dirvec[d], dirvec[dn], ray)
        rows.append(tuple(row))
    system = tuple(rows)

    sink_vids = [net.boundary_vertex(i) for i in po.sinks]
    flows = {}
    for i, vid in zip(po.sinks, sink_vids):
        rhs = tuple(wt[d] if head[d] == vid else Fraction(0) for d in range(n_edges))
        try:
            flows[i] = solve(system, rhs)
        except SingularMatrixError as exc:
            raise SingularityError(
                "path sums diverge: a directed cycle has weight 1"
            ) from exc

    n = len(net.boundary_order)
    matrix = [[Fraction(0)] * n for _ in po.sinks]
    for r, i in enumerate(po.sinks):
        matrix[r][i - 1] = Fraction(1)
        for j in po.sources:
            src = net.boundary_vertex(j)
            darts = out_darts[src]
            if not darts:
                continue
            (d0,) = darts
            value = flows[i][d0]
            calib = _winding_calibration(
                d0, net.boundary_vertex(i), head, out_darts, dirvec, ray, check_windings
            )
            if calib is None:
                if value:
                    raise DrawingError("nonzero path sum but no simple path found")
                continue
            lo, hi = min(i, j), max(i, j)
            n_between = sum(1 for s in po.sinks if lo < s < hi)
            matrix[r][j - 1] = (-1) ** n_between * calib * value
    return GrassmannPoint(mat(matrix))


def _winding_calibration(
    start: int,
    target: int,
    head: dict[int, int],
    out_darts: dict[int, list[int]],
    dirvec: dict[int, Point],
    ray: Point,
    check_all: bool,
) -> int | None:
    """Winding sign of simple start-dart-to-target paths (None when no path).

    All simple paths between fixed boundary points of a planar network share
    one winding parity; with `check_all` every simple path is enumerated and
    the agreement is verified rather than assumed.
    """
    found: list[int] = []
    on_path: set[int] = set()

    def rec(d: int, sign: int) -> None:
        if found and not check_all:
            return
        v = head[d]
        if v == target:
            found.append(sign)
            return
        if v in on_path:
            return
        on_path.add(v)
        for dn in out_darts[v]:
            rec(dn, sign * _corner_sign(dirvec[d], dirvec[dn], ray))
        on_path.discard(v)

    rec(start, 1)
    if not found:
        return None
    if check_all and any(s != found[0] for s in found):
        raise DrawingError("simple paths disagree on winding parity")
    return found[0]


# ------------------------------------------------------------------- Schur


def schur_reduce(
    K: BlockKasteleyn,
    matching: frozenset[int] | set[int],
    boundary_order: Sequence[int] | None = None,
) -> GrassmannPoint:
    """Eliminate interior white rows of a boundary Kasteleyn matrix.

    With rows split into boundary block A | B and interior block C | D (B, D
    the columns of blacks matched to interior whites), the reduction is
    A - B D^{-1} C with its first kept column scaled by det D.  The column
    scale clears all denominators at once: every maximal minor of the result
    is det of a full submatrix of K, i.e. exactly a signed matching
    generating function.  The returned point is the transpose (k x n)."""
    g = K.graph
    if any(c != 1 for _, c in K.row_index) or any(c != 1 for _, c in K.col_index):
        raise ValueError("Schur reduction applies to scalar (n=1) networks")
    row_of = {wid: r for r, (wid, _) in enumerate(K.row_index)}
    col_of = {bid: c for c, (bid, _) in enumerate(K.col_index)}
    interior_whites = sorted(
        wid for wid, _ in K.row_index if wid not in g.boundary
    )
    matched_black_of = {}
    for eid in matching:
        e = g.edges[eid]
        if e.white in interior_whites:
            matched_black_of[e.white] = e.black
    if sorted(matched_black_of) != interior_whites:
        raise ReductionError("matching must cover every interior white vertex")
    if boundary_order is None:
        boundary_order = sorted(wid for wid, _ in K.row_index if wid in g.boundary)
    elim_cols = [col_of[matched_black_of[w]] for w in interior_whites]
    if len(set(elim_cols)) != len(elim_cols):
        raise ReductionError("matching pairs two interior whites to one black")
    kept_cols = [c for c in range(len(K.col_index)) if c not in set(elim_cols)]
    bd_rows = [row_of[w] for w in boundary_order]
    int_rows = [row_of[w] for w in interior_whites]

    def block(rs: list[int], cs: list[int]) -> Mat:
        return tuple(tuple(K.entries[r][c] for c in cs) for r in rs)

    A, B = block(bd_rows, kept_cols), block(bd_rows, elim_cols)
    C, D = block(int_rows, kept_cols), block(int_rows, elim_cols)
    if int_rows:
        d_det = det(D)
        if not d_det:
            raise ReductionError(
                "matched interior block is singular; choose a different matching"
            )
        d_inv_c = solve_block(D, C)
        x = [
            [
                A[r][c] - sum(B[r][s] * d_inv_c[s][c] for s in range(len(elim_cols)))
                for c in range(len(kept_cols))
            ]
            for r in range(len(bd_rows))
        ]
    else:
        d_det = Fraction(1)
        x = [list(row) for row in A]
    for r in range(len(bd_rows)):
        x[r][0] *= d_det
    return GrassmannPoint(transpose(mat(x)))


def solve_block(D: Mat, C: Mat) -> list[list[Fraction]]:
    """Columns of D^{-1} C, solved one right-hand side at a time."""
    cols = []
    for c in range(len(C[0])):
        rhs = tuple(C[r][c] for r in range(len(C)))
        cols.append(solve(D, rhs))
    return [[cols[c][r] for c in range(len(C[0]))] for r in range(len(C))]


def scalar_kasteleyn(net: PlabicNetwork, signs: dict[int, int] | None = None) -> BlockKasteleyn:
    """Kasteleyn matrix of a scalar network: one row per white, one column per
    black, entry = sign times weight.  Signs default to +1 everywhere."""
    from .connection import Connection

    conn = Connection({e.id: ((net.weights[e.id],),) for e in net.graph.edges})
    from .kasteleyn import build_block_kasteleyn

    return build_block_kasteleyn(
        net.graph, conn, signs or {e.id: 1 for e in net.graph.edges}
    )


# ------------------------------------------------------------ constructors


def gr24_example(a, b, c, d) -> PlabicNetwork:
    """The standard 4-boundary network measuring a point of Gr(2, 4).

    An interior square (two whites, two blacks) with weights a, b, c, d on
    its sides, pendant legs of weight 1 to four boundary vertices numbered
    counterclockwise, and 2-valent whites keeping the legs bipartite.
    """
    F = Fraction
    colors = [BLACK, BLACK, BLACK, BLACK, WHITE, WHITE, WHITE, BLACK, WHITE, BLACK]
    positions = [
        (0, 2), (0, 0), (2, 0), (2, 2),  # boundary 1..4 (ids 0..3)
        (F(1, 4), F(7, 4)),  # 4: leg white near boundary 1
        (F(7, 4), F(1, 4)),  # 5: leg white near boundary 3
        (F(1, 2), F(1, 2)),  # 6: square white SW
        (F(1, 2), F(3, 2)),  # 7: square black NW
        (F(3, 2), F(3, 2)),  # 8: square white NE
        (F(3, 2), F(1, 2)),  # 9: square black SE
    ]
    edge_pairs = [
        (0, 4), (4, 7),  # boundary 1 leg
        (1, 6),          # boundary 2 leg
        (2, 5), (5, 9),  # boundary 3 leg
        (3, 8),          # boundary 4 leg
        (6, 7),  # weight a
        (6, 9),  # weight b
        (8, 9),  # weight c
        (8, 7),  # weight d
    ]
    weights = [1, 1, 1, 1, 1, 1, a, b, c, d]
    return build_network(colors, positions, edge_pairs, weights, [0, 1, 2, 3])


def top_cell_graph(k: int, n: int) -> PlabicNetwork:
    """A unit-weight grid network measuring the uniform top-cell point of
    Gr(k, n): a k x (n-k) array of split vertices, boundary 1..k up the left
    edge and k+1..n along the bottom, counterclockwise."""
    if not 0 < k < n:
        raise ValueError("need 0 < k < n")
    m = n - k
    F = Fraction
    colors: list[str] = []
    positions: list[tuple] = []
    ids: dict[tuple, int] = {}

    def add(name: tuple, color: str, pos: tuple) -> None:
        ids[name] = len(colors)
        colors.append(color)
        positions.append(pos)

    for r in range(1, k + 1):
        for c in range(1, m + 1):
            add(("w", r, c), WHITE, (c - F(1, 5), -r))
            add(("b", r, c), BLACK, (c + F(1, 5), -r))
    for r in range(1, k + 1):
        add(("bd", r), BLACK, (-F(1, 2), -r))
    for c in range(1, m + 1):
        add(("u", c), WHITE, (c + F(1, 5), -k - F(1, 2)))
        add(("bd", k + c), BLACK, (c + F(1, 5), -k - 1))

    edge_pairs = []
    for r in range(1, k + 1):
        for c in range(1, m + 1):
            edge_pairs.append((ids[("w", r, c)], ids[("b", r, c)]))
            if c < m:
                edge_pairs.append((ids[("b", r, c)], ids[("w", r, c + 1)]))
            if r >= 2:
                edge_pairs.append((ids[("w", r, c)], ids[("b", r - 1, c)]))
    for r in range(1, k + 1):
        edge_pairs.append((ids[("bd", r)], ids[("w", r, 1)]))
    for c in range(1, m + 1):
        edge_pairs.append((ids[("b", k, c)], ids[("u", c)]))
        edge_pairs.append((ids[("u", c)], ids[("bd", k + c)]))
    boundary_order = [ids[("bd", i)] for i in range(1, n + 1)]
    return build_network(colors, positions, edge_pairs, [1] * len(edge_pairs), boundary_order)


H26_WEIGHT_NAMES = ("a", "b", "c", "d", "e", "f", "x", "y", "u")


@dataclass
class GadgetNetwork:
    """A 6-boundary gadget network with its Kasteleyn signs.

    `edge_name` maps each weight name to its edge id; `schur_matching` pairs
    the central interior white with a black for Schur reduction."""

    net: PlabicNetwork
    signs: dict[int, int]
    edge_name: dict[str, int]
    schur_matching: frozenset[int]


def h26_network(weights: dict[str, Fraction]) -> GadgetNetwork:
    """The 6-boundary, 9-edge gadget whose Schur reduction hits a generic
    point of Gr(2, 6).

    Boundary whites 1..6 around a triangle of blacks; pendant whites at
    positions 1, 3, 5 carry unit weights, ring edges carry a..f, and a
    central white joins all three blacks with weights x, y, u.  Two edges
    (the `a` ring edge and the `y` spoke) carry Kasteleyn sign -1."""
    wt = {name: Fraction(weights[name]) for name in H26_WEIGHT_NAMES}
    colors = [WHITE] * 6 + [WHITE, BLACK, BLACK, BLACK]
    positions = [
        (-1, 3), (-3, 1), (-3, -2), (0, -4), (3, -2), (3, 1),  # boundary w1..w6
        (0, 0),  # 6: central white
        (0, 2), (-2, -1), (2, -1),  # 7..9: blacks b1..b3
    ]
    # (white id, black id, weight, sign)
    spec = [
        (0, 7, Fraction(1), 1),
        (1, 7, wt["b"], 1),
        (1, 8, wt["c"], 1),
        (2, 8, Fraction(1), 1),
        (3, 8, wt["d"], 1),
        (3, 9, wt["e"], 1),
        (4, 9, Fraction(1), 1),
        (5, 7, wt["a"], -1),
        (5, 9, wt["f"], 1),
        (6, 7, wt["x"], 1),
        (6, 8, wt["y"], -1),
        (6, 9, wt["u"], 1),
    ]
    net = build_network(
        colors,
        positions,
        [(w, b) for w, b, _, _ in spec],
        [w for _, _, w, _ in spec],
        [0, 1, 2, 3, 4, 5],
    )
    signs = {eid: s for eid, (_, _, _, s) in enumerate(spec)}
    edge_name = {
        "w1": 0, "b": 1, "c": 2, "w3": 3, "d": 4, "e": 5,
        "w5": 6, "a": 7, "f": 8, "x": 9, "y": 10, "u": 11,
    }
    return GadgetNetwork(net, signs, edge_name, frozenset({edge_name["u"]}))


def h26_weights(p: GrassmannPoint) -> dict[str, Fraction]:
    """Gadget weights hitting a given generic point of Gr(2, 6).

    Reads nine chamber minors off the point; raises NonGenericError when one
    of them vanishes (the point then lies in a smaller positroid cell)."""
    if (p.k, p.n) != (2, 6):
        raise ValueError("weight recovery needs a 2 x 6 point")
    d = p.plucker
    recipe = {
        "x": ((3, 5), None),
        "y": ((1, 5), None),
        "u": ((1, 3), None),
        "a": ((5, 6), (1, 5)),
        "b": ((2, 3), (1, 3)),
        "c": ((1, 2), (1, 3)),
        "d": ((4, 5), (3, 5)),
        "e": ((3, 4), (3, 5)),
        "f": ((1, 6), (1, 5)),
    }
    for name, (num, den) in recipe.items():
        for key in (num, den) if den else (num,):
            if not d[key]:
                raise NonGenericError(f"chamber minor Delta_{key[0]}{key[1]} vanishes")
    return {
        name: d[num] / d[den] if den else d[num]
        for name, (num, den) in recipe.items()
    }
