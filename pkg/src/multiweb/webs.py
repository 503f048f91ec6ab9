"""Multiwebs: edge multiplicity functions with prescribed vertex sums.

A multiweb assigns a nonnegative multiplicity to every edge so that the sum
around each interior vertex is its multiplicity n_v (d_v at boundary
vertices).  Enumeration is a depth-first search in edge-id order, which makes
the output order lexicographic in the multiplicity vector for free.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from typing import Iterator

from .graph import BLACK, PlanarGraph

DEFAULT_CAP = 10_000_000


class EnumerationCapExceeded(RuntimeError):
    pass


class InvalidMoveError(ValueError):
    pass


def enumeration_cap(explicit: int | None = None) -> int:
    """Effective partial-state cap: explicit argument, else the
    MULTIWEB_CAP environment variable, else the built-in default."""
    if explicit is not None:
        return explicit
    env = os.environ.get("MULTIWEB_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"MULTIWEB_CAP={env!r} is not an integer") from None
    return DEFAULT_CAP


@dataclass(frozen=True)
class Multiweb:
    graph: PlanarGraph
    multiplicities: tuple[int, ...]  # indexed by edge id

    def __getitem__(self, eid: int) -> int:
        return self.multiplicities[eid]

    def as_dict(self) -> dict[int, int]:
        return {e: m for e, m in enumerate(self.multiplicities) if m}

    def support(self) -> tuple[int, ...]:
        return tuple(e for e, m in enumerate(self.multiplicities) if m)

    def vertex_sum(self, vid: int) -> int:
        return sum(self.multiplicities[e] for e in self.graph.vertices[vid].rotation)

    def check(self) -> None:
        for e, m in enumerate(self.multiplicities):
            if m < 0:
                raise ValueError(f"negative multiplicity on edge {e}")
        for v in self.graph.vertices:
            want = self.graph.degree_target(v.id)
            got = self.vertex_sum(v.id)
            if got != want:
                raise ValueError(f"vertex {v.id}: multiplicities sum to {got}, expected {want}")


def from_dict(g: PlanarGraph, m: dict[int, int]) -> Multiweb:
    vec = [0] * len(g.edges)
    for e, k in m.items():
        vec[e] = k
    web = Multiweb(g, tuple(vec))
    web.check()
    return web


def _max_flow(capacity: dict[tuple, int], source, sink, nodes) -> int:
    """Edmonds-Karp; everything here is tiny, so simplicity wins."""
    flow = 0
    residual = dict(capacity)
    adj: dict[object, list] = {u: [] for u in nodes}
    for (u, v) in list(capacity):
        adj[u].append(v)
        if (v, u) not in capacity:
            residual[(v, u)] = 0
            adj[v].append(u)
    while True:
        parent = {source: source}
        queue = deque([source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v in adj[u]:
                if v not in parent and residual.get((u, v), 0) > 0:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            return flow
        path = []
        v = sink
        while v != source:
            path.append((parent[v], v))
            v = parent[v]
        push = min(residual[(u, w)] for u, w in path)
        for u, w in path:
            residual[(u, w)] -= push
            residual[(w, u)] = residual.get((w, u), 0) + push
        flow += push


def hall_feasible(g: PlanarGraph) -> bool:
    """True iff at least one multiweb exists: degree sums balance and every
    set of black vertices sees enough white multiplicity (checked by max-flow,
    which is equivalent to the Hall-type neighborhood condition)."""
    blacks = [v for v in g.vertices if v.color == BLACK]
    whites = [v for v in g.vertices if v.color != BLACK]
    need_b = sum(g.degree_target(v.id) for v in blacks)
    need_w = sum(g.degree_target(v.id) for v in whites)
    if need_b != need_w:
        return False
    if not g.edges:
        return need_b == 0
    source, sink = "s", "t"
    capacity: dict[tuple, int] = {}
    for v in blacks:
        capacity[(source, ("b", v.id))] = g.degree_target(v.id)
    for v in whites:
        capacity[(("w", v.id), sink)] = g.degree_target(v.id)
    for e in g.edges:
        cap = min(g.degree_target(e.black), g.degree_target(e.white))
        key = (("b", e.black), ("w", e.white))
        capacity[key] = capacity.get(key, 0) + cap
    nodes = [source, sink] + [("b", v.id) for v in blacks] + [("w", v.id) for v in whites]
    return _max_flow(capacity, source, sink, nodes) == need_b


def iter_multiwebs(g: PlanarGraph, cap: int | None = None) -> Iterator[Multiweb]:
    """Depth-first enumeration of all multiwebs, in lexicographic order of
    the edge-multiplicity vector.  Raises EnumerationCapExceeded if the search
    visits more partial states than the cap allows."""
    limit = enumeration_cap(cap)
    n_edges = len(g.edges)
    residual = [g.degree_target(v.id) for v in g.vertices]
    pending = {v.id: len(v.rotation) for v in g.vertices}  # unassigned incident edges
    assignment = [0] * n_edges
    states = 0

    def capacity_left(vid: int, next_eid: int) -> int:
        total = 0
        for e in g.vertices[vid].rotation:
            if e >= next_eid:
                total += min(residual[vid], residual[g.other_end(e, vid)])
        return total

    def rec(eid: int) -> Iterator[Multiweb]:
        nonlocal states
        states += 1
        if states > limit:
            raise EnumerationCapExceeded(
                f"multiweb enumeration exceeded {limit} partial states; raise the cap"
            )
        if eid == n_edges:
            if all(r == 0 for r in residual):
                yield Multiweb(g, tuple(assignment))
            return
        e = g.edges[eid]
        hi = min(residual[e.black], residual[e.white])
        for m in range(hi + 1):
            assignment[eid] = m
            residual[e.black] -= m
            residual[e.white] -= m
            pending[e.black] -= 1
            pending[e.white] -= 1
            ok = True
            for vid in (e.black, e.white):
                if pending[vid] == 0:
                    if residual[vid] != 0:
                        ok = False
                elif residual[vid] > capacity_left(vid, eid + 1):
                    ok = False
            if ok:
                yield from rec(eid + 1)
            residual[e.black] += m
            residual[e.white] += m
            pending[e.black] += 1
            pending[e.white] += 1
        assignment[eid] = 0

    yield from rec(0)


def enumerate_multiwebs(g: PlanarGraph, cap: int | None = None) -> list[Multiweb]:
    return list(iter_multiwebs(g, cap))


def loop_move(m: Multiweb, cycle: list[int]) -> Multiweb:
    """Apply a loop move along an alternating closed walk of edge ids.

    Edges at even positions gain one unit, edges at odd positions lose one;
    consecutive edges must share an endpoint so vertex sums are preserved
    (the result is re-checked).  Applying the move again along the reversed
    cycle undoes it.
    """
    g = m.graph
    if len(cycle) < 2 or len(cycle) % 2 != 0:
        raise InvalidMoveError("cycle must list an even number (>= 2) of edges")
    for i in range(1, len(cycle), 2):
        if m[cycle[i]] < 1:
            raise InvalidMoveError(f"edge {cycle[i]} has multiplicity 0 but should decrease")
    for i, eid in enumerate(cycle):
        nxt = cycle[(i + 1) % len(cycle)]
        e, f = g.edges[eid], g.edges[nxt]
        if e.black != f.black and e.white != f.white:
            raise InvalidMoveError(f"edges {eid} and {nxt} share no endpoint")
    vec = list(m.multiplicities)
    for i, eid in enumerate(cycle):
        vec[eid] += 1 if i % 2 == 0 else -1
    out = Multiweb(g, tuple(vec))
    try:
        out.check()
    except ValueError as exc:
        raise InvalidMoveError(f"cycle does not alternate: {exc}") from None
    return out


def difference_cycles(m_from: Multiweb, m_to: Multiweb) -> list[list[int]]:
    """Decompose m_to - m_from into alternating cycles.

    The difference of two multiwebs is a divergence-free flow, so it peels
    into closed alternating walks.  Applying the returned cycles in order to
    m_from (via loop_move) produces m_to, through valid intermediate webs.
    """
    g = m_from.graph
    diff = [b - a for a, b in zip(m_from.multiplicities, m_to.multiplicities)]
    cycles: list[list[int]] = []
    while any(diff):
        start = next(e for e, d in enumerate(diff) if d > 0)
        home = g.edges[start].black
        pivot = home
        walk: list[int] = []
        while True:
            want = 1 if len(walk) % 2 == 0 else -1
            nxt = min(
                (e for e in g.vertices[pivot].rotation if want * diff[e] > 0),
                default=None,
            )
            if nxt is None:
                raise RuntimeError("difference flow is not divergence-free")
            diff[nxt] -= want  # consume one unit as we traverse
            walk.append(nxt)
            pivot = g.other_end(nxt, pivot)
            if pivot == home and len(walk) % 2 == 0:
                break
        cycles.append(walk)
    return cycles
