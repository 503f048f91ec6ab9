"""Scalarization: trading a rank-2 local system for a plain dimer model.

Every vertex of a trivalent (or lower-degree) graph carrying a rank-2
connection is replaced by a small scalar gadget with six boundary stubs,
grouped into three pairs -- one pair per attachment slot, in rotation order.
Gadgets at opposite ends of an original edge are joined by a pair of
parallel edges, one per stub channel; slots with no incident edge are capped
off by deleting their stubs.  White vertices all receive the same
unit-weight gadget, whose boundary behaviour is the fixed 2 x 6 matrix
``WHITE_GADGET_MATRIX``; black vertices receive a nine-parameter gadget
whose weights are recovered from the target connection through chamber
minors of a 2 x 6 Grassmann point.

A dimer cover of the substituted graph projects to a 2-web of the source by
counting *unoccupied* parallel edges, and for each 2-web the total weight of
its fiber equals the web's trace under the realized connection.  The
realized connection differs from the requested one only by a determinant-1
change of basis at each black vertex, so all traces agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache

from .connection import Connection, trace_multiweb
from .graph import BLACK, PLANE, TORUS, WHITE, Edge, PlanarGraph, Vertex
from .grassmann import (
    GadgetNetwork,
    GrassmannPoint,
    build_network,
    h26_network,
    h26_weights,
    scalar_kasteleyn,
    schur_reduce,
)
from .linalg import Mat, det, identity, inverse, mat, mat_mul, transpose
from .webs import Multiweb, iter_multiwebs

#: Boundary behaviour of the unit-weight white gadget: column pair i is the
#: 2 x 2 block presented to attachment slot i.
WHITE_GADGET_MATRIX: Mat = mat(
    [
        [1, 0, -1, -3, -2, -3],
        [0, 1, 1, 2, 1, 1],
    ]
)

#: Boundary stub indices (into 0..5) belonging to each attachment slot.
SLOT_PAIRS = ((0, 1), (2, 3), (4, 5))

_GADGET_BOUNDARY = tuple(range(6))
_WEIGHT_ONE = Fraction(1)


class ScalarizationError(ValueError):
    pass


def white_block(slot: int) -> Mat:
    """The 2 x 2 block the white gadget presents to a slot."""
    a, b = SLOT_PAIRS[slot]
    M = WHITE_GADGET_MATRIX
    return mat([[M[0][a], M[0][b]], [M[1][a], M[1][b]]])


@cache
def _white_blocks() -> tuple[Mat, Mat, Mat]:
    return tuple(white_block(s) for s in range(3))


@cache
def _white_block_inverses() -> tuple[Mat, Mat, Mat]:
    return tuple(inverse(x) for x in _white_blocks())


@cache
def white_gadget_network() -> GadgetNetwork:
    """The unit-weight mirror gadget used at white vertices.

    Same abstract graph as the black gadget but with the two colour classes
    exchanged and the drawing reflected, so its boundary stubs read
    clockwise where the black gadget's read counterclockwise."""
    black = h26_network({n: _WEIGHT_ONE for n in "abcdefxyu"})
    g = black.net.graph
    colors = [WHITE if v.color == BLACK else BLACK for v in g.vertices]
    positions = [(-x, y) for x, y in (black.net.positions[v.id] for v in g.vertices)]
    pairs = [(e.black, e.white) for e in g.edges]
    net = build_network(colors, positions, pairs, [1] * len(pairs), list(_GADGET_BOUNDARY))
    return GadgetNetwork(net, dict(black.signs), dict(black.edge_name), black.schur_matching)


# ------------------------------------------------------------ gadget algebra


def black_gadget_blocks(weights: dict[str, Fraction]) -> tuple[Mat, Mat, Mat]:
    """Realized slot blocks of the black gadget with the given weights.

    Row pair i of the transposed Schur reduction of the gadget's Kasteleyn
    matrix; maximal minors of the underlying 2 x 6 matrix are exactly the
    gadget's internal matching sums."""
    gadget = h26_network(weights)
    K = scalar_kasteleyn(gadget.net, gadget.signs)
    point = schur_reduce(K, gadget.schur_matching, list(_GADGET_BOUNDARY))
    kred = point.matrix
    return tuple(
        mat(
            [
                [kred[0][2 * i], kred[1][2 * i]],
                [kred[0][2 * i + 1], kred[1][2 * i + 1]],
            ]
        )
        for i in range(3)
    )


def gadget_weights(blocks) -> dict[str, Fraction]:
    """Gadget weights whose realized blocks equal the given three 2 x 2
    target blocks up to a common determinant-1 right factor.

    Raises NonGenericError when a chamber minor of the stacked 6 x 2 matrix
    vanishes."""
    rows = [list(row) for blk in blocks for row in mat(blk)]
    return h26_weights(GrassmannPoint(transpose(mat(rows))))


def normalized_gadget_blocks(weights: dict[str, Fraction]) -> tuple[Mat, Mat, Mat]:
    """Realized blocks normalized so the slot-0 block is the identity."""
    y = black_gadget_blocks(weights)
    y0_inv = inverse(y[0])
    return (identity(2), mat_mul(y[1], y0_inv), mat_mul(y[2], y0_inv))


def induced_honeycomb_pair(weights: dict[str, Fraction]) -> tuple[Mat, Mat]:
    """The two-matrix honeycomb local system induced by a black gadget.

    On the torus honeycomb the A-edge sits in black slot 1 and white slot 2,
    the B-edge in black slot 2 and white slot 1, so A = X_2 Y_1 and
    B = X_1 Y_2 in slot-normalized blocks."""
    _, y1, y2 = normalized_gadget_blocks(weights)
    x = _white_blocks()
    return mat_mul(x[2], y1), mat_mul(x[1], y2)


def gadget_weights_for_pair(A, B) -> dict[str, Fraction]:
    """Weights of the black gadget inducing the honeycomb pair (A, B)."""
    xi = _white_block_inverses()
    return gadget_weights((identity(2), mat_mul(xi[2], mat(A)), mat_mul(xi[1], mat(B))))


# ------------------------------------------------------------- construction


@dataclass(frozen=True)
class GadgetPlacement:
    """One gadget dropped in place of a source vertex."""

    vertex: int
    color: str
    slot_edges: dict[int, int]  # slot -> incident source edge id
    capped: tuple[int, ...]  # slots with no incident edge
    vertex_ids: dict[int, int]  # surviving gadget-local vertex id -> new id
    edge_ids: dict[int, int]  # surviving gadget-local edge id -> new id
    weights: dict[str, Fraction] | None  # black gadgets only
    blocks: tuple[Mat, Mat, Mat]  # realized slot blocks


@dataclass
class Scalarization:
    """A dimer model equivalent to a rank-2 web model.

    ``groups`` maps each source edge to its two parallel replacement edges
    (channel 0, channel 1); ``weights`` carries the scalar edge weights;
    ``gauges`` records, for each black vertex, the determinant-1 right
    factor relating the realized connection to the requested one."""

    source: PlanarGraph
    realized: Connection
    target: Connection | None
    gauges: dict[int, Mat]
    hat: PlanarGraph
    weights: dict[int, Fraction]
    groups: dict[int, tuple[int, int]]
    gadgets: dict[int, GadgetPlacement]
    slots: dict[int, dict[int, int]]


def default_slots(g: PlanarGraph) -> dict[int, dict[int, int]]:
    """Assign each edge the slot given by its position in the rotation."""
    return {v.id: {eid: pos for pos, eid in enumerate(v.rotation)} for v in g.vertices}


def _check_source(g: PlanarGraph, slots: dict[int, dict[int, int]]) -> None:
    if g.surface == TORUS:
        raise ScalarizationError(
            "scalarization builds a planar scalar graph; pass a planar cover of a torus model"
        )
    if g.boundary:
        raise ScalarizationError("scalarization applies to closed graphs")
    for v in g.vertices:
        if v.n != 2:
            raise ScalarizationError(f"vertex {v.id} has multiplicity {v.n}; gadgets are rank-2")
        if len(v.rotation) > 3:
            raise ScalarizationError(f"vertex {v.id} has degree {len(v.rotation)} > 3")
        assigned = slots.get(v.id)
        if assigned is None:
            raise ScalarizationError(f"vertex {v.id} missing from slot assignment")
        if set(assigned) != set(v.rotation):
            raise ScalarizationError(f"slot assignment of vertex {v.id} does not match its edges")
        values = sorted(assigned.values())
        if values != sorted(set(values)) or any(s not in (0, 1, 2) for s in values):
            raise ScalarizationError(f"slots of vertex {v.id} must be distinct members of 0..2")


def scalarize(
    g: PlanarGraph, conn: Connection, slots: dict[int, dict[int, int]] | None = None
) -> Scalarization:
    """Build the scalar dimer model matching a given rank-2 connection.

    Black gadget weights are recovered from the connection; the realized
    connection returned in the result differs from `conn` by a
    determinant-1 basis change at each black vertex, so every web trace is
    reproduced exactly.  Raises NonGenericError when some target matrix
    falls outside the generic chamber of the weight recovery."""
    if slots is None:
        slots = default_slots(g)
    _check_source(g, slots)
    conn.validate_for(g)
    xi = _white_block_inverses()
    black_weights: dict[int, dict[str, Fraction]] = {}
    targets: dict[int, tuple[Mat, Mat, Mat]] = {}
    for v in g.vertices:
        if v.color != BLACK:
            continue
        slot_edge = {s: e for e, s in slots[v.id].items()}
        blocks = []
        for s in range(3):
            eid = slot_edge.get(s)
            if eid is None:
                # Capped slot: a generic filler equivalent to attaching a
                # phantom identity edge at the matching white slot.
                blocks.append(xi[s])
            else:
                e = g.edges[eid]
                w_slot = slots[e.white][eid]
                blocks.append(mat_mul(xi[w_slot], conn.matrices[eid]))
        targets[v.id] = tuple(blocks)
        black_weights[v.id] = gadget_weights(blocks)
    s = _assemble(g, slots, black_weights)
    s.target = conn
    for vid, tgt in targets.items():
        realized = s.gadgets[vid].blocks
        gauge = mat_mul(inverse(tgt[0]), realized[0])
        if det(gauge) != 1:
            raise RuntimeError(f"gauge at vertex {vid} is not determinant 1")
        for i in range(3):
            if mat_mul(tgt[i], gauge) != realized[i]:
                raise RuntimeError(f"realized blocks of vertex {vid} are not a gauge of the target")
        s.gauges[vid] = gauge
    return s


def scalarization_from_weights(
    g: PlanarGraph,
    black_weights: dict[int, dict[str, Fraction]],
    slots: dict[int, dict[int, int]] | None = None,
) -> Scalarization:
    """Build the scalar model directly from chosen black gadget weights.

    The realized connection is read off the gadgets; any positive weight
    choice is admissible."""
    if slots is None:
        slots = default_slots(g)
    _check_source(g, slots)
    missing = [v.id for v in g.vertices if v.color == BLACK and v.id not in black_weights]
    if missing:
        raise ScalarizationError(f"missing gadget weights for black vertices {missing}")
    weights = {
        vid: {name: Fraction(w) for name, w in wts.items()} for vid, wts in black_weights.items()
    }
    return _assemble(g, slots, weights)


def _assemble(
    g: PlanarGraph,
    slots: dict[int, dict[int, int]],
    black_weights: dict[int, dict[str, Fraction]],
) -> Scalarization:
    white_net = white_gadget_network()
    placements: dict[int, GadgetPlacement] = {}
    hat_edges: list[Edge] = []
    hat_weights: dict[int, Fraction] = {}
    rotations: dict[int, list[int]] = {}
    colors: dict[int, str] = {}

    nets: dict[int, GadgetNetwork] = {}
    for v in g.vertices:
        if v.color == BLACK:
            nets[v.id] = h26_network(black_weights[v.id])
        else:
            nets[v.id] = white_net

    # Vertices: gadget by gadget, surviving locals in local order.
    for v in sorted(g.vertices, key=lambda v: v.id):
        net = nets[v.id]
        local_g = net.net.graph
        slot_edge = {s: e for e, s in slots[v.id].items()}
        capped = tuple(s for s in range(3) if s not in slot_edge)
        dead_locals = {stub for s in capped for stub in SLOT_PAIRS[s]}
        vertex_ids: dict[int, int] = {}
        for lv in local_g.vertices:
            if lv.id in dead_locals:
                continue
            nid = len(colors)
            vertex_ids[lv.id] = nid
            # Local colours already encode the gadget's own colouring: the
            # white gadget is built with the two classes exchanged.
            colors[nid] = lv.color
            rotations[nid] = []
        blocks = (
            black_gadget_blocks(black_weights[v.id]) if v.color == BLACK else _white_blocks()
        )
        placements[v.id] = GadgetPlacement(
            v.id,
            v.color,
            slot_edge,
            capped,
            vertex_ids,
            {},
            black_weights.get(v.id),
            blocks,
        )

    # Edges, in an order that keeps each vertex's incidences close together
    # (gadgets in breadth-first order over the source graph, with each
    # parallel pair following its second gadget) so depth-first cover
    # enumeration can prune locally.
    order: list[int] = []
    seen: set[int] = set()
    for seed in sorted(v.id for v in g.vertices):
        if seed in seen:
            continue
        queue = [seed]
        seen.add(seed)
        while queue:
            vid = queue.pop(0)
            order.append(vid)
            for eid in g.vertices[vid].rotation:
                nxt = g.other_end(eid, vid)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    edge_ids_by_vertex: dict[int, dict[int, int]] = {v.id: {} for v in g.vertices}
    groups: dict[int, tuple[int, int]] = {}
    done: set[int] = set()
    for v in (g.vertices[vid] for vid in order):
        net = nets[v.id]
        local_g = net.net.graph
        placement = placements[v.id]
        for le in local_g.edges:
            if le.black not in placement.vertex_ids or le.white not in placement.vertex_ids:
                continue
            nid = len(hat_edges)
            edge_ids_by_vertex[v.id][le.id] = nid
            b, w = placement.vertex_ids[le.black], placement.vertex_ids[le.white]
            if colors[b] != BLACK:
                b, w = w, b
            hat_edges.append(Edge(nid, b, w))
            hat_weights[nid] = net.net.weights[le.id]
        done.add(v.id)
        for e in sorted(g.edges, key=lambda e: e.id):
            if e.id in groups or e.black not in done or e.white not in done:
                continue
            sb = slots[e.black][e.id]
            sw = slots[e.white][e.id]
            pair = []
            for k in (0, 1):
                nid = len(hat_edges)
                black_end = placements[e.white].vertex_ids[SLOT_PAIRS[sw][k]]
                white_end = placements[e.black].vertex_ids[SLOT_PAIRS[sb][k]]
                hat_edges.append(Edge(nid, black_end, white_end))
                hat_weights[nid] = _WEIGHT_ONE
                pair.append(nid)
            groups[e.id] = tuple(pair)

    # Rotations: the gadget's own rotation restricted to surviving edges,
    # with each stub's replacement edge appended.  The substituted graph is
    # used purely combinatorially (dimer covers), so face data is not
    # maintained and the graph is not validated as an embedding.
    for v in g.vertices:
        placement = placements[v.id]
        local_g = nets[v.id].net.graph
        emap = edge_ids_by_vertex[v.id]
        for lv_id, nid in placement.vertex_ids.items():
            rotations[nid] = [
                emap[le] for le in local_g.vertices[lv_id].rotation if le in emap
            ]
    for e in sorted(g.edges, key=lambda e: e.id):
        sb, sw = slots[e.black][e.id], slots[e.white][e.id]
        for k in (0, 1):
            rotations[placements[e.black].vertex_ids[SLOT_PAIRS[sb][k]]].append(groups[e.id][k])
            rotations[placements[e.white].vertex_ids[SLOT_PAIRS[sw][k]]].append(groups[e.id][k])

    final_vertices = [
        Vertex(nid, colors[nid], 1, tuple(rotations[nid]), None)
        for nid in range(len(colors))
    ]
    hat = PlanarGraph(final_vertices, hat_edges, PLANE, {})

    placements = {
        vid: GadgetPlacement(
            p.vertex,
            p.color,
            p.slot_edges,
            p.capped,
            p.vertex_ids,
            dict(edge_ids_by_vertex[vid]),
            p.weights,
            p.blocks,
        )
        for vid, p in placements.items()
    }

    realized = Connection(
        {
            e.id: mat_mul(
                placements[e.white].blocks[slots[e.white][e.id]],
                placements[e.black].blocks[slots[e.black][e.id]],
            )
            for e in g.edges
        }
    )
    return Scalarization(
        source=g,
        realized=realized,
        target=None,
        gauges={},
        hat=hat,
        weights=hat_weights,
        groups=groups,
        gadgets=placements,
        slots=slots,
    )


# ---------------------------------------------------------------- the fiber


def project_dimer(s: Scalarization, cover: Multiweb) -> Multiweb:
    """Project a dimer cover of the substituted graph to a 2-web.

    The multiplicity of a source edge is the number of *unoccupied* edges in
    its parallel pair."""
    mults = [0] * len(s.source.edges)
    for eid, (k0, k1) in s.groups.items():
        mults[eid] = (1 - cover[k0]) + (1 - cover[k1])
    return Multiweb(s.source, tuple(mults))


def hat_cover_sums(s: Scalarization, cap: int | None = None) -> dict[tuple[int, ...], Fraction]:
    """Fiber weights by direct enumeration of dimer covers of the
    substituted graph.  Exponential in its size; practical for a handful of
    gadgets, and the ground truth `fiber_sums` is checked against."""
    sums: dict[tuple[int, ...], Fraction] = {}
    for cover in iter_multiwebs(s.hat, cap):
        weight = _WEIGHT_ONE
        for eid in cover.support():
            weight *= s.weights[eid]
        key = project_dimer(s, cover).multiplicities
        sums[key] = sums.get(key, Fraction(0)) + weight
    return sums


def _gadget_matchings(s: Scalarization, vid: int) -> dict[frozenset[int], Fraction]:
    """Internal matching sums of one gadget, keyed by the set of boundary
    stubs (gadget-local ids) covered internally."""
    p = s.gadgets[vid]
    hat = s.hat
    stub_of_hat = {p.vertex_ids[l]: l for l in p.vertex_ids if l < 6}
    inner = sorted(h for l, h in p.vertex_ids.items() if l >= 6)
    edges_at: dict[int, list[int]] = {h: [] for h in p.vertex_ids.values()}
    for eid in sorted(p.edge_ids.values()):
        e = hat.edges[eid]
        edges_at[e.black].append(eid)
        edges_at[e.white].append(eid)
    out: dict[frozenset[int], Fraction] = {}

    def rec(i: int, covered: set[int], acc: Fraction) -> None:
        while i < len(inner) and inner[i] in covered:
            i += 1
        if i == len(inner):
            key = frozenset(stub_of_hat[h] for h in covered if h in stub_of_hat)
            out[key] = out.get(key, Fraction(0)) + acc
            return
        v = inner[i]
        for eid in edges_at[v]:
            other = hat.other_end(eid, v)
            if other in covered:
                continue
            covered.add(v)
            covered.add(other)
            rec(i + 1, covered, acc * s.weights[eid])
            covered.remove(v)
            covered.remove(other)

    rec(0, set(), _WEIGHT_ONE)
    return out


def fiber_sums(s: Scalarization, cap: int | None = None) -> dict[tuple[int, ...], Fraction]:
    """Total cover weight of each fiber, keyed by 2-web multiplicity vector.

    Every dimer cover of the substituted graph splits uniquely into one
    internal matching per gadget plus a set of occupied parallel edges, so
    the fiber weight of a web is a sum over channel choices of products of
    per-gadget internal matching sums.  This is exactly the total weight
    `hat_cover_sums` enumerates, computed gadget by gadget."""
    tables = {v.id: _gadget_matchings(s, v.id) for v in s.source.vertices}
    zero = Fraction(0)
    sums: dict[tuple[int, ...], Fraction] = {}
    for web in iter_multiwebs(s.source, cap):
        mixed = [eid for eid, m in enumerate(web.multiplicities) if m == 1]
        total = zero
        base_cover: dict[int, set[int]] = {v.id: set() for v in s.source.vertices}
        for eid, m in enumerate(web.multiplicities):
            if m == 0:  # both parallel edges occupied
                e = s.source.edges[eid]
                for k in (0, 1):
                    base_cover[e.black].add(SLOT_PAIRS[s.slots[e.black][eid]][k])
                    base_cover[e.white].add(SLOT_PAIRS[s.slots[e.white][eid]][k])
        for bits in range(1 << len(mixed)):
            cover = {vid: set(stubs) for vid, stubs in base_cover.items()}
            for pos, eid in enumerate(mixed):
                k = (bits >> pos) & 1
                e = s.source.edges[eid]
                cover[e.black].add(SLOT_PAIRS[s.slots[e.black][eid]][k])
                cover[e.white].add(SLOT_PAIRS[s.slots[e.white][eid]][k])
            term = _WEIGHT_ONE
            for v in s.source.vertices:
                survivors = {l for l in s.gadgets[v.id].vertex_ids if l < 6}
                key = frozenset(survivors - cover[v.id])
                term *= tables[v.id].get(key, zero)
                if not term:
                    break
            total += term
        sums[web.multiplicities] = total
    return sums


def verify_measure_preservation(
    s: Scalarization,
    m: Multiweb | None = None,
    cap: int | None = None,
    method: str = "minors",
) -> dict:
    """Check that each web's fiber weight equals its trace.

    With a web given, returns {"fiber_sum", "trace", "equal"} for that web
    alone (the whole fiber is still enumerated).  Otherwise checks every
    2-web of the source and reports per-web records plus totals."""
    sums = fiber_sums(s, cap)
    zero = Fraction(0)
    if m is not None:
        t = trace_multiweb(m, s.realized, method=method)
        f = sums.get(m.multiplicities, zero)
        return {"fiber_sum": f, "trace": t, "equal": f == t}
    per_web = {}
    trace_total = zero
    for web in iter_multiwebs(s.source, cap):
        t = trace_multiweb(web, s.realized, method=method)
        f = sums.get(web.multiplicities, zero)
        per_web[web.multiplicities] = {"fiber_sum": f, "trace": t, "equal": f == t}
        trace_total += t
    stray = [key for key in sums if key not in per_web and sums[key]]
    return {
        "webs": per_web,
        "all_equal": not stray and all(r["equal"] for r in per_web.values()),
        "fiber_total": sum(sums.values(), zero),
        "trace_total": trace_total,
        "unmatched_fibers": stray,
    }
