"""Honeycomb graphs on the torus and their finite hexagon patches.

The periodic honeycomb has a two-vertex fundamental domain: one black and one
white vertex joined by three edges, one per translation class.  We label the
classes I, A and B; a rank-2 local system that is the identity on I-edges,
``A`` on A-edges and ``B`` on B-edges is the "two-matrix" model whose
characteristic polynomial is P(z, w) = det(Id + z A + w B).

This module builds the quotient graph, finite toroidal covers, and planar
patches made of whole hexagons.  Patch vertices remember which translation
class each incident edge belongs to and which of the three attachment slots
(in ccw order from the cilium) the class occupies, so downstream constructions
can treat every patch vertex as a trivalent vertex with some slots unused.
"""

from __future__ import annotations

from dataclasses import dataclass

from .connection import Connection
from .graph import BLACK, TORUS, WHITE, Edge, PlanarGraph, Vertex
from .kasteleyn import BlockKasteleyn, build_block_kasteleyn
from .linalg import Mat, identity, mat

CLASS_I = "I"
CLASS_A = "A"
CLASS_B = "B"

# ccw order of edge classes around a vertex, and the slot each class takes.
BLACK_CLASS_ORDER = (CLASS_I, CLASS_A, CLASS_B)
WHITE_CLASS_ORDER = (CLASS_I, CLASS_B, CLASS_A)  # stored (clockwise) order
BLACK_SLOT = {CLASS_I: 0, CLASS_A: 1, CLASS_B: 2}
WHITE_SLOT = {CLASS_I: 0, CLASS_B: 1, CLASS_A: 2}

E_I, E_A, E_B = 0, 1, 2
TORUS_CLASSES = {E_I: CLASS_I, E_A: CLASS_A, E_B: CLASS_B}


def torus_graph(n: int = 2) -> PlanarGraph:
    """The two-vertex honeycomb quotient on the torus.

    Edge 0 is the I-edge (homology (0,0)), edge 1 the A-edge (crossing the
    first cycle), edge 2 the B-edge (crossing the second)."""
    cil = 0 if n % 2 == 0 else None
    black = Vertex(0, BLACK, n, (E_I, E_A, E_B), cilium=cil)
    white = Vertex(1, WHITE, n, (E_I, E_B, E_A), cilium=cil)
    edges = [
        Edge(E_I, 0, 1, (0, 0)),
        Edge(E_A, 0, 1, (1, 0)),
        Edge(E_B, 0, 1, (0, 1)),
    ]
    g = PlanarGraph([black, white], edges, surface=TORUS)
    g.check_valid()
    return g


def honeycomb_connection(
    g: PlanarGraph, A, B, classes: dict[int, str] | None = None
) -> Connection:
    """The local system that is Id on I-edges, A on A-edges, B on B-edges."""
    A = mat(A)
    B = mat(B)
    if classes is None:
        classes = TORUS_CLASSES
    ident = identity(len(A))
    by_class = {CLASS_I: ident, CLASS_A: A, CLASS_B: B}
    return Connection({e.id: by_class[classes[e.id]] for e in g.edges})


def characteristic_matrix(
    g: PlanarGraph, conn: Connection, signs: dict[int, int] | None = None
) -> BlockKasteleyn:
    """Kasteleyn block matrix with Laurent entries z^i w^j on a torus graph.

    With the trivial sign choice (all +1) on the honeycomb quotient, the
    expanded determinant is det(Id + z A + w B)."""
    if signs is None:
        signs = {e.id: 1 for e in g.edges}
    return build_block_kasteleyn(g, conn, signs)


def torus_patch(p: int, q: int, n: int = 2) -> tuple[PlanarGraph, dict[int, str]]:
    """A p x q toroidal cover of the honeycomb quotient.

    Returns the graph together with a map from edge id to translation class.
    Black and white vertices of cell (i, j) get ids 2*(i*q+j) and 2*(i*q+j)+1;
    cell (i, j) owns edges 3*(i*q+j)+{0,1,2} for classes I, A, B."""
    if p < 1 or q < 1:
        raise ValueError("cover dimensions must be positive")

    def bid(i: int, j: int) -> int:
        return 2 * ((i % p) * q + (j % q))

    def eid(i: int, j: int, k: int) -> int:
        return 3 * ((i % p) * q + (j % q)) + k

    cil = 0 if n % 2 == 0 else None
    vertices: list[Vertex] = []
    edges: list[Edge] = []
    classes: dict[int, str] = {}
    for i in range(p):
        for j in range(q):
            b = bid(i, j)
            # The A-edge of cell (i, j) joins b(i, j) to w(i-1, j); the
            # B-edge joins b(i, j) to w(i, j-1).
            edges.append(Edge(eid(i, j, 0), b, b + 1, (0, 0)))
            edges.append(Edge(eid(i, j, 1), b, bid(i - 1, j) + 1, (1, 0) if i == 0 else (0, 0)))
            edges.append(Edge(eid(i, j, 2), b, bid(i, j - 1) + 1, (0, 1) if j == 0 else (0, 0)))
            classes[eid(i, j, 0)] = CLASS_I
            classes[eid(i, j, 1)] = CLASS_A
            classes[eid(i, j, 2)] = CLASS_B
            vertices.append(Vertex(b, BLACK, n, (eid(i, j, 0), eid(i, j, 1), eid(i, j, 2)), cilium=cil))
            vertices.append(
                Vertex(
                    b + 1,
                    WHITE,
                    n,
                    (eid(i, j, 0), eid(i, j + 1, 2), eid(i + 1, j, 1)),
                    cilium=cil,
                )
            )
    edges.sort(key=lambda e: e.id)
    g = PlanarGraph(vertices, edges, surface=TORUS)
    g.check_valid()
    return g, classes


@dataclass(frozen=True)
class HexPatch:
    """A planar union of whole hexagons cut out of the honeycomb.

    ``classes`` maps edge id to its translation class; ``slots`` maps vertex
    id to {edge id: slot}, where slots 0..2 are the three attachment
    positions in stored rotation order (I, A, B around black vertices and
    I, B, A around white ones).  Slots of classes with no kept edge are the
    unused ("capped") positions."""

    graph: PlanarGraph
    classes: dict[int, str]
    slots: dict[int, dict[int, int]]
    cells: tuple[tuple[int, int], ...]

    def unused_slots(self, vid: int) -> tuple[int, ...]:
        used = set(self.slots[vid].values())
        return tuple(s for s in range(3) if s not in used)


def hexagon_patch(cells, n: int = 2) -> HexPatch:
    """The patch spanned by the given hexagonal faces.

    Cells are (i, j) coordinates; cell (i, j) denotes the hexagon bounded by
    the I- and B-edges of black vertex (i, j), the A- and B-edges of black
    vertex (i+1, j) and the I- and A-edges of black vertex (i+1, j-1).
    Adjacent cells share edges; (0, 0) and (1, 0) are neighbours."""
    cell_list = sorted(set((int(i), int(j)) for i, j in cells))
    if not cell_list:
        raise ValueError("a patch needs at least one hexagon")
    edge_keys: set[tuple[str, int, int]] = set()
    for i, j in cell_list:
        edge_keys.update(
            {
                (CLASS_I, i, j),
                (CLASS_A, i + 1, j),
                (CLASS_B, i + 1, j),
                (CLASS_I, i + 1, j - 1),
                (CLASS_A, i + 1, j - 1),
                (CLASS_B, i, j),
            }
        )

    def endpoints(key: tuple[str, int, int]) -> tuple[tuple[str, int, int], tuple[str, int, int]]:
        cls, i, j = key
        if cls == CLASS_I:
            return ("b", i, j), ("w", i, j)
        if cls == CLASS_A:
            return ("b", i, j), ("w", i - 1, j)
        return ("b", i, j), ("w", i, j - 1)

    class_rank = {CLASS_I: 0, CLASS_A: 1, CLASS_B: 2}
    ordered_edges = sorted(edge_keys, key=lambda k: (k[1], k[2], class_rank[k[0]]))
    eid_of = {key: e for e, key in enumerate(ordered_edges)}
    vertex_keys = sorted({v for key in edge_keys for v in endpoints(key)})
    vid_of = {key: v for v, key in enumerate(vertex_keys)}

    # Incident edge candidates per vertex, in stored rotation order.
    def stored_rotation(vkey: tuple[str, int, int]) -> list[tuple[str, int]]:
        colour, i, j = vkey
        if colour == "b":
            candidates = [(CLASS_I, (CLASS_I, i, j)), (CLASS_A, (CLASS_A, i, j)), (CLASS_B, (CLASS_B, i, j))]
            order = BLACK_CLASS_ORDER
        else:
            candidates = [
                (CLASS_I, (CLASS_I, i, j)),
                (CLASS_B, (CLASS_B, i, j + 1)),
                (CLASS_A, (CLASS_A, i + 1, j)),
            ]
            order = WHITE_CLASS_ORDER
        by_class = {cls: key for cls, key in candidates}
        return [(cls, eid_of[by_class[cls]]) for cls in order if by_class[cls] in edge_keys]

    vertices: list[Vertex] = []
    slots: dict[int, dict[int, int]] = {}
    for vkey in vertex_keys:
        vid = vid_of[vkey]
        colour = BLACK if vkey[0] == "b" else WHITE
        rot = stored_rotation(vkey)
        slot_map = BLACK_SLOT if colour == BLACK else WHITE_SLOT
        vertices.append(Vertex(vid, colour, n, tuple(e for _, e in rot), cilium=0 if n % 2 == 0 else None))
        slots[vid] = {e: slot_map[cls] for cls, e in rot}

    edges = [
        Edge(eid_of[key], vid_of[endpoints(key)[0]], vid_of[endpoints(key)[1]])
        for key in ordered_edges
    ]
    edges.sort(key=lambda e: e.id)
    classes = {eid_of[key]: key[0] for key in ordered_edges}
    g = PlanarGraph(vertices, edges)
    g.check_valid()
    return HexPatch(g, classes, slots, tuple(cell_list))


def patch_connection(patch: HexPatch, A, B) -> Connection:
    """The honeycomb local system restricted to a patch."""
    return honeycomb_connection(patch.graph, A, B, patch.classes)


def charpoly_det(A, B) -> "object":
    """det(Id + z A + w B) computed through the torus Kasteleyn matrix."""
    from .kasteleyn import det_expanded

    g = torus_graph(len(mat(A)))
    conn = honeycomb_connection(g, A, B)
    return det_expanded(characteristic_matrix(g, conn))


def _class_matrix(conn: Connection, classes: dict[int, str], cls: str) -> Mat:
    for eid, c in classes.items():
        if c == cls:
            return conn.matrices[eid]
    raise KeyError(f"no edge of class {cls}")
