"""Sign rules, block Kasteleyn matrices and the determinant identity."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from multiweb import webs
from multiweb.connection import trace_multiweb
from multiweb.graph import trace_faces
from multiweb.kasteleyn import (
    SignError,
    assign_signs,
    build_block_kasteleyn,
    check_signs,
    det_expanded,
    face_sign_target,
    loop_monodromy,
    verify_main_theorem,
)
from multiweb.linalg import minor_det
from multiweb.samples import (
    B_A,
    B_B,
    E_B,
    E_C,
    E_F,
    E_G,
    E_a,
    E_e,
    TWO_FOUR_SIGNS,
    TWO_FOUR_WEBS,
    W_B,
    doubled_edge_graph,
    four_cycle_graph,
    random_connection,
    single_edge_graph,
    two_four_graph,
)

FIXTURES = [single_edge_graph, doubled_edge_graph, four_cycle_graph, two_four_graph]


def test_face_sign_target():
    g = two_four_graph()
    targets = {(f.length, f.cilia): face_sign_target(f) for f in trace_faces(g)}
    # product of signs must be (-1)^(L/2 + 1 + cilia)
    assert targets == {(4, 0): 1, (4, 1): 0, (6, 1): 1}


def test_stored_signs_satisfy_every_face():
    g = two_four_graph()
    assert check_signs(g, TWO_FOUR_SIGNS) == []


def test_check_signs_reports_violations():
    g = two_four_graph()
    bad = dict(TWO_FOUR_SIGNS)
    bad[E_F] = 1  # all-plus assignment breaks two faces
    problems = check_signs(g, bad)
    assert len(problems) == 2
    assert check_signs(g, bad, exempt=None) != []


def test_assign_signs_two_four():
    g = two_four_graph()
    assert assign_signs(g) == TWO_FOUR_SIGNS


def test_assign_signs_all_fixtures():
    for fixture in FIXTURES:
        g = fixture()
        signs = assign_signs(g)
        # on a closed planar graph the exempt face comes out satisfied too
        assert check_signs(g, signs) == []


def test_assign_signs_extra_constraints():
    g = four_cycle_graph()
    signs = assign_signs(g, extra_constraints=[([0], 1)])
    assert signs[0] == -1
    assert check_signs(g, signs) == []
    with pytest.raises(SignError):
        # forcing both faces even is inconsistent with the face rule
        assign_signs(g, extra_constraints=[([0], 0), ([1], 0), ([2], 0), ([3], 0)])


def test_loop_monodromy():
    assert loop_monodromy(TWO_FOUR_SIGNS, [E_B, E_G, E_F, E_e]) == -1
    assert loop_monodromy(TWO_FOUR_SIGNS, [E_a, E_B]) == 1


def test_block_kasteleyn_layout():
    g = two_four_graph()
    conn = random_connection(g, random.Random(2))
    K = build_block_kasteleyn(g, conn, TWO_FOUR_SIGNS)
    assert K.shape() == (5, 5)
    # row/column indices walk vertices in id order, one row per color
    assert [w for w, _ in K.row_index] == [0, 4, 4, 4, 5]
    assert [b for b, _ in K.col_index] == [1, 2, 2, 3, 3]
    # blocks carry sign * connection matrix
    block = K.block(W_B, B_A)
    expected = conn.matrix(E_C)
    assert block == [list(row) for row in expected]
    assert K.block(W_B, B_B) == [[r[0]] for r in conn.matrix(E_B)]
    # vertices with no joining edge give a zero block
    assert K.block(0, 3) == [[0, 0]]


def test_determinant_identity_on_fixtures():
    for fixture in FIXTURES:
        g = fixture()
        conn = random_connection(g, random.Random(13))
        res = verify_main_theorem(g, conn)
        assert res["ok"], (fixture.__name__, res)
        assert res["sign"] in (1, -1)
        assert res["lhs"] == res["sign"] * res["rhs"]


def test_two_four_sign_is_minus_one():
    g = two_four_graph()
    conn = random_connection(g, random.Random(11))
    res = verify_main_theorem(g, conn, TWO_FOUR_SIGNS)
    assert res["ok"]
    assert res["webs"] == 3
    assert res["sign"] == -1
    assert res["lhs"] == Fraction(44653, 48)


def test_trace_routes_agree_inside_identity():
    g = two_four_graph()
    conn = random_connection(g, random.Random(17))
    r1 = verify_main_theorem(g, conn, TWO_FOUR_SIGNS, method="minors")
    r2 = verify_main_theorem(g, conn, TWO_FOUR_SIGNS, method="split")
    assert r1["rhs"] == r2["rhs"]
    assert r1["ok"] and r2["ok"]


def test_cofactor_grouping_matches_webs():
    """Cofactor groups of the first column reproduce individual web traces.

    Expanding det K along the column of the n=1 black vertex splits the sum
    over multiwebs by which edge serves that vertex; each group of cofactor
    terms equals the signed trace of one multiweb."""
    g = two_four_graph()
    conn = random_connection(g, random.Random(23))
    K = build_block_kasteleyn(g, conn, TWO_FOUR_SIGNS)
    entries = tuple(tuple(row) for row in K.entries)
    s = -1  # global sign for this graph
    minors = [minor_det(entries, [r for r in range(5) if r != i], [1, 2, 3, 4]) for i in range(5)]
    cof = [(-1) ** i * entries[i][0] * minors[i] for i in range(5)]
    traces = [
        trace_multiweb(webs.from_dict(g, w), conn) for w in TWO_FOUR_WEBS
    ]
    # web 1 uses the pendant edge (row of the n=1 white)
    assert cof[0] == s * traces[0]
    # web 2 uses the edge to the other n=1 white
    assert cof[4] == s * traces[1]
    # web 3 uses the edge into the n=3 white: three middle rows together
    assert cof[1] + cof[2] + cof[3] == s * traces[2]
    assert sum(cof) == s * sum(traces)


def test_shifted_cilium_keeps_identity():
    g = two_four_graph().with_cilium(B_A, 0)
    conn = random_connection(g, random.Random(29))
    res = verify_main_theorem(g, conn)
    assert res["ok"]


def test_verify_rejects_boundary_graphs():
    from multiweb.graph import DISK, Edge, PlanarGraph, Vertex
    from multiweb.graph import BLACK, WHITE

    g = PlanarGraph(
        [Vertex(0, BLACK, 1, (0,), None), Vertex(1, WHITE, 1, (0,), None)],
        [Edge(0, 0, 1)],
        DISK,
        {1: 1},
    )
    conn = random_connection(g, random.Random(1))
    with pytest.raises(ValueError):
        verify_main_theorem(g, conn)
