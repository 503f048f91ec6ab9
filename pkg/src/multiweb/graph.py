"""Planar-embedded bipartite graphs with multiplicities, cilia and faces.

The embedding is purely combinatorial: each vertex stores the cyclic order of
its incident edges (counterclockwise at black vertices, clockwise at white
ones -- the order in which trace words are read).  A cilium is an index into
that rotation; the mark sits in the wedge *before* the indexed edge.

Vertex and edge ids are dense integers from 0, so lists double as lookup
tables and serialization is stable.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

BLACK = "black"
WHITE = "white"

DISK = "disk"
PLANE = "plane"
TORUS = "torus"

# A dart is an edge traversed away from one endpoint: (edge id, tail color).
Dart = tuple[int, str]


class EmbeddingError(ValueError):
    """Raised when a rotation system is internally inconsistent."""


@dataclass(frozen=True)
class Vertex:
    id: int
    color: str
    n: int
    rotation: tuple[int, ...]
    cilium: int | None = None


@dataclass(frozen=True)
class Edge:
    id: int
    black: int
    white: int
    homology: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Face:
    walk: tuple[Dart, ...]
    length: int
    cilia: int

    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.walk)


@dataclass
class PlanarGraph:
    vertices: list[Vertex]
    edges: list[Edge]
    surface: str = PLANE
    boundary: dict[int, int] = field(default_factory=dict)  # vertex id -> d_v

    # ---- basic access ----

    def vertex(self, vid: int) -> Vertex:
        return self.vertices[vid]

    def edge(self, eid: int) -> Edge:
        return self.edges[eid]

    def other_end(self, eid: int, vid: int) -> int:
        e = self.edges[eid]
        return e.white if e.black == vid else e.black

    def endpoint(self, eid: int, color: str) -> int:
        e = self.edges[eid]
        return e.black if color == BLACK else e.white

    def blacks(self) -> list[Vertex]:
        return [v for v in self.vertices if v.color == BLACK]

    def whites(self) -> list[Vertex]:
        return [v for v in self.vertices if v.color == WHITE]

    def is_boundary(self, vid: int) -> bool:
        return vid in self.boundary

    def degree_target(self, vid: int) -> int:
        """The required edge-multiplicity sum at a vertex: d_v on the
        boundary, n_v in the interior."""
        d = self.boundary.get(vid)
        return d if d is not None else self.vertices[vid].n

    def with_cilium(self, vid: int, cilium: int | None) -> "PlanarGraph":
        vs = list(self.vertices)
        vs[vid] = replace(vs[vid], cilium=cilium)
        return PlanarGraph(vs, list(self.edges), self.surface, dict(self.boundary))

    def validate(self) -> list[str]:
        return validate(self)

    def check_valid(self) -> None:
        check_valid(self)

    # ---- embedding ----

    def ccw_rotation(self, vid: int) -> tuple[int, ...]:
        """Rotation normalized to a global counterclockwise order."""
        v = self.vertices[vid]
        return v.rotation if v.color == BLACK else tuple(reversed(v.rotation))

    def cilium_corner(self, vid: int) -> tuple[int, int] | None:
        """The ccw corner (incoming edge, outgoing edge) the cilium sits in,
        or None when the vertex has no cilium."""
        v = self.vertices[vid]
        if v.cilium is None:
            return None
        r = v.rotation
        k = len(r)
        if v.color == BLACK:
            return (r[(v.cilium - 1) % k], r[v.cilium % k])
        return (r[v.cilium % k], r[(v.cilium - 1) % k])


def trace_faces(g: PlanarGraph) -> list[Face]:
    """All faces of the ribbon graph, as orbits of the face permutation.

    Each dart appears on exactly one face walk; walking a face, the corner
    traversed at each vertex is the ccw wedge from the incoming edge to the
    outgoing edge, which is how cilia are counted per face.
    """
    ccw = {v.id: g.ccw_rotation(v.id) for v in g.vertices}
    nxt: dict[tuple[int, int], int] = {}
    for vid, rot in ccw.items():
        k = len(rot)
        for i, e in enumerate(rot):
            if (vid, e) in nxt:
                raise EmbeddingError(f"edge {e} repeated in rotation of vertex {vid}")
            nxt[(vid, e)] = rot[(i + 1) % k]
    cilium_corners = {v.id: g.cilium_corner(v.id) for v in g.vertices}

    darts: list[Dart] = []
    for e in g.edges:
        darts.append((e.id, BLACK))
        darts.append((e.id, WHITE))
    unseen = set(darts)
    faces = []
    for d0 in darts:
        if d0 not in unseen:
            continue
        walk: list[Dart] = []
        cilia = 0
        d = d0
        while True:
            walk.append(d)
            unseen.discard(d)
            eid, tail = d
            head = g.endpoint(eid, WHITE if tail == BLACK else BLACK)
            try:
                e_out = nxt[(head, eid)]
            except KeyError:
                raise EmbeddingError(f"edge {eid} missing from rotation of vertex {head}")
            if cilium_corners[head] == (eid, e_out):
                cilia += 1
            d = (e_out, g.vertices[head].color)
            if d == d0:
                break
            if d not in unseen:
                raise EmbeddingError("face tracing revisited a dart; rotations are inconsistent")
        faces.append(Face(tuple(walk), len(walk), cilia))
    return faces


def connected_components(g: PlanarGraph) -> int:
    if not g.vertices:
        return 0
    seen: set[int] = set()
    count = 0
    adj: dict[int, list[int]] = {v.id: [] for v in g.vertices}
    for e in g.edges:
        adj[e.black].append(e.white)
        adj[e.white].append(e.black)
    for v in g.vertices:
        if v.id in seen:
            continue
        count += 1
        stack = [v.id]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(adj[u])
    return count


def validate(g: PlanarGraph) -> list[str]:
    """All invariant violations, as human-readable strings.  Empty == valid."""
    problems: list[str] = []
    for i, v in enumerate(g.vertices):
        if v.id != i:
            problems.append(f"vertex at position {i} has id {v.id}; ids must be dense from 0")
        if v.color not in (BLACK, WHITE):
            problems.append(f"vertex {v.id} has unknown color {v.color!r}")
        if v.n < 1:
            problems.append(f"vertex {v.id} has non-positive multiplicity {v.n}")
        if v.n % 2 == 0 and v.cilium is None:
            problems.append(f"vertex {v.id} has even multiplicity but no cilium")
        if v.n % 2 == 1 and v.cilium is not None:
            problems.append(f"vertex {v.id} has odd multiplicity but carries a cilium")
        if v.cilium is not None and not (0 <= v.cilium < max(1, len(v.rotation))):
            problems.append(f"vertex {v.id} cilium index {v.cilium} out of range")
    if problems:
        return problems  # id errors make the rest unreliable

    incident: dict[int, list[int]] = {v.id: [] for v in g.vertices}
    for i, e in enumerate(g.edges):
        if e.id != i:
            problems.append(f"edge at position {i} has id {e.id}; ids must be dense from 0")
            continue
        for vid in (e.black, e.white):
            if not (0 <= vid < len(g.vertices)):
                problems.append(f"edge {e.id} references missing vertex {vid}")
        if not (0 <= e.black < len(g.vertices) and 0 <= e.white < len(g.vertices)):
            continue
        if g.vertices[e.black].color != BLACK or g.vertices[e.white].color != WHITE:
            problems.append(f"edge {e.id} is not bipartite (black={e.black}, white={e.white})")
        incident[e.black].append(e.id)
        incident[e.white].append(e.id)
        if e.homology != (0, 0) and g.surface != TORUS:
            problems.append(f"edge {e.id} carries homology {e.homology} on surface {g.surface}")
    if problems:
        return problems

    for v in g.vertices:
        if sorted(v.rotation) != sorted(incident[v.id]):
            problems.append(
                f"rotation of vertex {v.id} is {v.rotation}, not a permutation of "
                f"its incident edges {tuple(sorted(incident[v.id]))}"
            )

    for vid, d in g.boundary.items():
        if not (0 <= vid < len(g.vertices)):
            problems.append(f"boundary entry references missing vertex {vid}")
        elif d < 1 or d > g.vertices[vid].n:
            problems.append(f"boundary vertex {vid} has d={d} outside 1..n={g.vertices[vid].n}")
    if g.boundary and g.surface != DISK:
        problems.append(f"boundary data on surface {g.surface!r} (expected {DISK!r})")
    if problems:
        return problems

    if g.vertices and connected_components(g) != 1:
        problems.append("graph is not connected")
        return problems

    if g.edges:
        try:
            faces = trace_faces(g)
        except EmbeddingError as exc:
            problems.append(f"face tracing failed: {exc}")
            return problems
        euler = len(g.vertices) - len(g.edges) + len(faces)
        expected = 0 if g.surface == TORUS else 2
        if euler != expected:
            problems.append(
                f"Euler characteristic V-E+F = {euler}, expected {expected} for {g.surface}"
            )
    return problems


def check_valid(g: PlanarGraph) -> None:
    problems = validate(g)
    if problems:
        raise EmbeddingError("invalid graph: " + "; ".join(problems))
