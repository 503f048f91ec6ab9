"""JSON serialization round trips."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from multiweb.io import (
    FormatError,
    connection_from_json,
    connection_to_json,
    dump_json,
    fmt_q,
    graph_from_json,
    graph_to_json,
    load_json,
    multiweb_from_json,
    multiweb_to_json,
    network_from_json,
    network_to_json,
    parse_q,
    poly_from_json,
    poly_to_json,
)
from multiweb.laurent import ONE, W, Z, LaurentPoly2
from multiweb.grassmann import gr24_example, top_cell_graph
from multiweb.samples import (
    TWO_FOUR_WEBS,
    four_cycle_graph,
    random_connection,
    two_four_graph,
)


def test_fmt_parse_q():
    assert fmt_q(Fraction(3, 4)) == "3/4"
    assert fmt_q(Fraction(5)) == "5"
    assert fmt_q(Fraction(-2, 7)) == "-2/7"
    assert parse_q("3/4") == Fraction(3, 4)
    assert parse_q("-5") == Fraction(-5)
    for x in (Fraction(0), Fraction(22, 7), Fraction(-9, 2)):
        assert parse_q(fmt_q(x)) == x


def test_graph_roundtrip():
    import json

    for g in (two_four_graph(), four_cycle_graph()):
        doc = dump_json(graph_to_json(g))
        back = graph_from_json(json.loads(doc))
        assert back == g


def test_graph_roundtrip_preserves_cilia_and_boundary():
    g = two_four_graph()
    back = graph_from_json(graph_to_json(g))
    assert [v.cilium for v in back.vertices] == [v.cilium for v in g.vertices]
    net = gr24_example(Fraction(1), Fraction(1), Fraction(1), Fraction(1))
    back2 = graph_from_json(graph_to_json(net.graph))
    assert back2.boundary == net.graph.boundary
    assert back2.surface == net.graph.surface


def test_connection_roundtrip():
    g = two_four_graph()
    conn = random_connection(g, random.Random(5))
    doc = connection_to_json(conn.matrices)
    assert connection_from_json(doc) == dict(conn.matrices)


def test_multiweb_roundtrip():
    for web in TWO_FOUR_WEBS:
        assert multiweb_from_json(multiweb_to_json(web)) == web


def test_multiweb_json_strips_zeros():
    doc = multiweb_to_json({0: 2, 1: 0, 5: 1})
    assert doc == [{"edge": 0, "m": 2}, {"edge": 5, "m": 1}]


def test_network_roundtrip():
    for net in (
        gr24_example(Fraction(2), Fraction(3), Fraction(5), Fraction(7)),
        top_cell_graph(2, 4),
    ):
        back = network_from_json(network_to_json(net))
        assert back == net


def test_poly_roundtrip():
    p = ONE + 2 * Z - W * W + LaurentPoly2.monomial(-1, 3, Fraction(5, 2))
    assert poly_from_json(poly_to_json(p)) == p
    assert poly_from_json(poly_to_json(LaurentPoly2())) == LaurentPoly2()


def test_format_errors():
    with pytest.raises(FormatError):
        multiweb_from_json([{"edge": "x"}])
    with pytest.raises(FormatError):
        poly_from_json({"terms": [["a", "b", "c"]]})
    with pytest.raises(FormatError):
        poly_from_json({})


def test_dump_json_stable(tmp_path):
    g = two_four_graph()
    doc = graph_to_json(g)
    assert dump_json(doc) == dump_json(graph_to_json(g))
    path = tmp_path / "graph.json"
    path.write_text(dump_json(doc))
    assert graph_from_json(load_json(str(path))) == g
