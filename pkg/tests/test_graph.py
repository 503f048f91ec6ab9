"""Rotation systems, faces, cilia and validation."""

from __future__ import annotations

import pytest

from multiweb.graph import (
    BLACK,
    DISK,
    PLANE,
    WHITE,
    Edge,
    EmbeddingError,
    PlanarGraph,
    Vertex,
    connected_components,
    trace_faces,
)
from multiweb.samples import (
    B_A,
    B_B,
    B_C,
    E_B,
    E_C,
    E_D,
    E_F,
    E_G,
    E_a,
    E_e,
    W_B,
    doubled_edge_graph,
    four_cycle_graph,
    single_edge_graph,
    two_four_graph,
)


def face_profile(g: PlanarGraph) -> list[tuple[int, int]]:
    return sorted((f.length, f.cilia) for f in trace_faces(g))


def test_fixtures_validate():
    for g in (two_four_graph(), single_edge_graph(), doubled_edge_graph(), four_cycle_graph()):
        assert g.validate() == []


def test_two_four_faces():
    g = two_four_graph()
    faces = trace_faces(g)
    assert face_profile(g) == [(4, 0), (4, 1), (6, 1)]
    # every dart lies on exactly one face
    assert sum(f.length for f in faces) == 2 * len(g.edges)
    # Euler characteristic of the sphere
    assert len(g.vertices) - len(g.edges) + len(faces) == 2


def test_small_fixture_faces():
    assert face_profile(single_edge_graph()) == [(2, 0)]
    assert face_profile(doubled_edge_graph()) == [(2, 2)]
    assert face_profile(four_cycle_graph()) == [(4, 0), (4, 0)]


def test_euler_characteristic():
    for g in (two_four_graph(), single_edge_graph(), doubled_edge_graph(), four_cycle_graph()):
        chi = len(g.vertices) - len(g.edges) + len(trace_faces(g))
        assert chi == 2


def test_ccw_rotation():
    g = two_four_graph()
    # black rotations are already counterclockwise
    assert g.ccw_rotation(B_B) == (E_a, E_e, E_B)
    # white rotations are stored clockwise, so ccw reverses them
    assert g.vertex(W_B).rotation == (E_G, E_B, E_C)
    assert g.ccw_rotation(W_B) == (E_C, E_B, E_G)


def test_cilium_corner():
    g = two_four_graph()
    assert g.cilium_corner(B_A) == (E_D, E_C)
    assert g.cilium_corner(B_C) == (E_F, E_G)
    assert g.cilium_corner(W_B) is None


def test_with_cilium_copies():
    g = two_four_graph()
    g2 = g.with_cilium(B_A, 0)
    assert g.vertex(B_A).cilium == 1
    assert g2.vertex(B_A).cilium == 0
    assert g2.validate() == []
    assert g2.cilium_corner(B_A) == (E_C, E_D)


def test_degree_target_and_boundary():
    g = two_four_graph()
    assert not g.boundary
    assert g.degree_target(W_B) == 3
    assert g.degree_target(B_A) == 2
    b = PlanarGraph(
        [Vertex(0, BLACK, 2, (0,), 0), Vertex(1, WHITE, 2, (0,), 0)],
        [Edge(0, 0, 1)],
        DISK,
        {1: 2},
    )
    assert b.validate() == []
    assert b.is_boundary(1) and not b.is_boundary(0)
    assert b.degree_target(1) == 2  # d_v, not n_v


def test_validation_rejects_bad_rotation():
    g = PlanarGraph(
        [
            Vertex(0, BLACK, 1, (0, 0), None),  # edge listed twice
            Vertex(1, WHITE, 1, (0,), None),
        ],
        [Edge(0, 0, 1)],
        PLANE,
        {},
    )
    assert g.validate()
    with pytest.raises(EmbeddingError):
        g.check_valid()


def test_validation_rejects_monochromatic_edge():
    g = PlanarGraph(
        [Vertex(0, BLACK, 1, (0,), None), Vertex(1, WHITE, 1, (0,), None)],
        [Edge(0, 1, 0)],  # black endpoint is a white vertex
        PLANE,
        {},
    )
    assert g.validate()


def test_validation_rejects_boundary_on_plane():
    g = PlanarGraph(
        [Vertex(0, BLACK, 1, (0,), None), Vertex(1, WHITE, 1, (0,), None)],
        [Edge(0, 0, 1)],
        PLANE,
        {1: 1},
    )
    assert any("disk" in p for p in g.validate())


def test_connected_components():
    assert connected_components(two_four_graph()) == 1
    g = PlanarGraph(
        [
            Vertex(0, BLACK, 1, (0,), None),
            Vertex(1, WHITE, 1, (0,), None),
            Vertex(2, BLACK, 1, (1,), None),
            Vertex(3, WHITE, 1, (1,), None),
        ],
        [Edge(0, 0, 1), Edge(1, 2, 3)],
        PLANE,
        {},
    )
    assert connected_components(g) == 2
    assert g.validate()  # disconnected graphs are flagged


def test_other_end_and_endpoint():
    g = two_four_graph()
    e = g.edge(E_C)
    assert g.other_end(E_C, e.black) == e.white
    assert g.other_end(E_C, e.white) == e.black
    assert g.endpoint(E_C, BLACK) == B_A
    assert g.endpoint(E_C, WHITE) == W_B
