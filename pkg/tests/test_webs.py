"""Multiweb enumeration, loop moves and difference cycles."""

from __future__ import annotations

import pytest

from multiweb import webs
from multiweb.graph import BLACK, PLANE, WHITE, Edge, PlanarGraph, Vertex
from multiweb.samples import (
    E_B,
    E_D,
    E_F,
    E_G,
    E_e,
    TWO_FOUR_WEBS,
    doubled_edge_graph,
    four_cycle_graph,
    single_edge_graph,
    two_four_graph,
)
from multiweb.webs import (
    DEFAULT_CAP,
    EnumerationCapExceeded,
    InvalidMoveError,
    Multiweb,
    difference_cycles,
    enumerate_multiwebs,
    enumeration_cap,
    hall_feasible,
    loop_move,
)


def test_enumerate_two_four():
    g = two_four_graph()
    ms = enumerate_multiwebs(g)
    assert len(ms) == 3
    found = [m.as_dict() for m in ms]
    for expected in TWO_FOUR_WEBS:
        assert expected in found


def test_enumeration_deterministic():
    g = two_four_graph()
    a = [m.multiplicities for m in enumerate_multiwebs(g)]
    b = [m.multiplicities for m in enumerate_multiwebs(g)]
    assert a == b


def test_enumerated_webs_satisfy_degrees():
    g = two_four_graph()
    for m in enumerate_multiwebs(g):
        m.check()
        for v in g.vertices:
            assert m.vertex_sum(v.id) == g.degree_target(v.id)


def test_small_graph_counts():
    assert len(enumerate_multiwebs(single_edge_graph())) == 1
    [m] = enumerate_multiwebs(doubled_edge_graph())
    assert m.multiplicities == (2,)
    covers = enumerate_multiwebs(four_cycle_graph())
    assert sorted(m.support() for m in covers) == [(0, 2), (1, 3)]


def test_enumeration_cap():
    assert enumeration_cap(7) == 7
    assert enumeration_cap() == DEFAULT_CAP
    with pytest.raises(EnumerationCapExceeded):
        enumerate_multiwebs(four_cycle_graph(), cap=1)


def test_enumeration_cap_env(monkeypatch):
    monkeypatch.setenv("MULTIWEB_CAP", "3")
    assert enumeration_cap() == 3
    monkeypatch.setenv("MULTIWEB_CAP", "1")
    with pytest.raises(EnumerationCapExceeded):
        enumerate_multiwebs(four_cycle_graph())


def test_from_dict_checks_degrees():
    g = two_four_graph()
    with pytest.raises(ValueError):
        webs.from_dict(g, {})
    with pytest.raises(ValueError):
        webs.from_dict(g, {E_D: -1})


def test_hall_feasibility():
    for g in (two_four_graph(), four_cycle_graph(), doubled_edge_graph()):
        assert hall_feasible(g)
    # total demand mismatch: the black vertex wants 3, the whites supply 2
    g = PlanarGraph(
        [
            Vertex(0, BLACK, 3, (0, 1), None),
            Vertex(1, WHITE, 1, (0,), None),
            Vertex(2, WHITE, 1, (1,), None),
        ],
        [Edge(0, 0, 1), Edge(1, 0, 2)],
        PLANE,
        {},
    )
    assert not hall_feasible(g)
    assert enumerate_multiwebs(g) == []


def test_loop_move():
    g = two_four_graph()
    m2 = webs.from_dict(g, TWO_FOUR_WEBS[1])
    m3 = webs.from_dict(g, TWO_FOUR_WEBS[2])
    moved = loop_move(m2, [E_B, E_G, E_F, E_e])
    assert moved.multiplicities == m3.multiplicities
    # reversing the cycle undoes the move
    back = loop_move(moved, [E_e, E_F, E_G, E_B])
    assert back.multiplicities == m2.multiplicities


def test_loop_move_rejects_bad_cycles():
    g = two_four_graph()
    m1 = webs.from_dict(g, TWO_FOUR_WEBS[0])
    m2 = webs.from_dict(g, TWO_FOUR_WEBS[1])
    with pytest.raises(InvalidMoveError):
        loop_move(m1, [E_B])  # odd length
    with pytest.raises(InvalidMoveError):
        loop_move(m1, [E_B, E_D])  # E_D would drop below zero
    with pytest.raises(InvalidMoveError):
        loop_move(m2, [E_B, E_F, E_G, E_e])  # consecutive edges share no endpoint


def test_difference_cycles_lengths():
    g = two_four_graph()
    ms = [webs.from_dict(g, w) for w in TWO_FOUR_WEBS]
    assert [len(c) for c in difference_cycles(ms[0], ms[1])] == [6]
    assert [len(c) for c in difference_cycles(ms[1], ms[2])] == [4]
    assert [len(c) for c in difference_cycles(ms[0], ms[2])] == [4]
    assert difference_cycles(ms[0], ms[0]) == []


def test_difference_cycles_transport():
    g = two_four_graph()
    ms = [webs.from_dict(g, w) for w in TWO_FOUR_WEBS]
    for src in ms:
        for dst in ms:
            cur = src
            for cycle in difference_cycles(src, dst):
                cur = loop_move(cur, cycle)
            assert cur.multiplicities == dst.multiplicities


def test_multiweb_accessors():
    g = two_four_graph()
    m = webs.from_dict(g, TWO_FOUR_WEBS[0])
    assert m[E_G] == 1
    assert m.support() == tuple(sorted(TWO_FOUR_WEBS[0]))
    assert m.as_dict() == TWO_FOUR_WEBS[0]
