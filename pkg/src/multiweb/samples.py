"""Small reference graphs used by the test-suite and the CLI demos.

The centerpiece is a closed planar graph with mixed multiplicities 1, 2, 3
whose five-by-five expanded Kasteleyn matrix, three multiwebs, and cofactor
ledger are worked through entry by entry in the tests.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .connection import Connection
from .graph import BLACK, PLANE, WHITE, Edge, PlanarGraph, Vertex

# Vertex ids of the mixed-multiplicity example graph.
W_A, B_B, B_A, B_C, W_B, W_C = 0, 1, 2, 3, 4, 5

# Edge ids, named by the letter of their connection block.
E_a, E_D, E_B, E_e, E_C, E_G, E_F = 0, 1, 2, 3, 4, 5, 6

TWO_FOUR_SIGNS = {E_a: 1, E_D: 1, E_B: 1, E_e: 1, E_C: 1, E_G: 1, E_F: -1}

# The three multiwebs of the example graph, as edge -> multiplicity maps.
TWO_FOUR_WEBS = [
    {E_a: 1, E_C: 2, E_G: 1, E_F: 1},
    {E_D: 1, E_C: 1, E_G: 2, E_e: 1},
    {E_D: 1, E_C: 1, E_B: 1, E_G: 1, E_F: 1},
]


def two_four_graph() -> PlanarGraph:
    """Closed planar graph with n-values 1,1,2,2,3,1 and seven edges.

    An inner quadrilateral (multiplicity-1 white, the n=3 white, and the two
    n=1 vertices) sits next to a square face; two vertices have even n and
    carry cilia, one pointing into the quadrilateral and one into the outer
    face.  With the stored signs, the face sign rule holds on all three
    faces simultaneously."""
    vertices = [
        Vertex(W_A, WHITE, 1, (E_D, E_a), None),
        Vertex(B_B, BLACK, 1, (E_a, E_e, E_B), None),
        Vertex(B_A, BLACK, 2, (E_D, E_C), 1),
        Vertex(B_C, BLACK, 2, (E_G, E_F), 0),
        Vertex(W_B, WHITE, 3, (E_G, E_B, E_C), None),
        Vertex(W_C, WHITE, 1, (E_F, E_e), None),
    ]
    edges = [
        Edge(E_a, B_B, W_A, (0, 0)),
        Edge(E_D, B_A, W_A, (0, 0)),
        Edge(E_B, B_B, W_B, (0, 0)),
        Edge(E_e, B_B, W_C, (0, 0)),
        Edge(E_C, B_A, W_B, (0, 0)),
        Edge(E_G, B_C, W_B, (0, 0)),
        Edge(E_F, B_C, W_C, (0, 0)),
    ]
    g = PlanarGraph(vertices, edges, PLANE, {})
    g.check_valid()
    return g


def random_fraction(rng: random.Random, mag: int = 5, max_den: int = 4) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(-mag * den, mag * den), den)


def random_connection(
    g: PlanarGraph, rng: random.Random, mag: int = 5, max_den: int = 4
) -> Connection:
    """Independent random rational entries for every connection matrix."""
    mats = {}
    for e in g.edges:
        nw = g.vertices[e.white].n
        nb = g.vertices[e.black].n
        mats[e.id] = tuple(
            tuple(random_fraction(rng, mag, max_den) for _ in range(nb))
            for _ in range(nw)
        )
    return Connection(mats)


# --------------------------------------------------------- tiny closed graphs


def single_edge_graph() -> PlanarGraph:
    """One black, one white, one edge, n = 1: a single dimer."""
    vertices = [
        Vertex(0, BLACK, 1, (0,), None),
        Vertex(1, WHITE, 1, (0,), None),
    ]
    edges = [Edge(0, 0, 1, (0, 0))]
    g = PlanarGraph(vertices, edges, PLANE, {})
    g.check_valid()
    return g


def doubled_edge_graph() -> PlanarGraph:
    """One edge carrying multiplicity 2 between two n = 2 vertices."""
    vertices = [
        Vertex(0, BLACK, 2, (0,), 0),
        Vertex(1, WHITE, 2, (0,), 0),
    ]
    edges = [Edge(0, 0, 1, (0, 0))]
    g = PlanarGraph(vertices, edges, PLANE, {})
    g.check_valid()
    return g


def four_cycle_graph() -> PlanarGraph:
    """A quadrilateral with n = 1 everywhere: two dimer covers."""
    vertices = [
        Vertex(0, BLACK, 1, (0, 3), None),
        Vertex(1, WHITE, 1, (0, 1), None),
        Vertex(2, BLACK, 1, (2, 1), None),
        Vertex(3, WHITE, 1, (3, 2), None),
    ]
    edges = [
        Edge(0, 0, 1, (0, 0)),
        Edge(1, 2, 1, (0, 0)),
        Edge(2, 2, 3, (0, 0)),
        Edge(3, 0, 3, (0, 0)),
    ]
    g = PlanarGraph(vertices, edges, PLANE, {})
    g.check_valid()
    return g
