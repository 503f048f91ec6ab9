"""Gadget substitution: weight recovery, fibers and measure preservation."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction as Q

import pytest

from multiweb.connection import Connection, trace_multiweb
from multiweb.graph import BLACK, PLANE, WHITE, Edge, PlanarGraph, Vertex
from multiweb.grassmann import NonGenericError
from multiweb.honeycomb import hexagon_patch, patch_connection, torus_graph
from multiweb.linalg import det, identity, inverse, mat, mat_mul
from multiweb.samples import random_fraction
from multiweb.scalar import (
    SLOT_PAIRS,
    WHITE_GADGET_MATRIX,
    ScalarizationError,
    black_gadget_blocks,
    fiber_sums,
    gadget_weights,
    gadget_weights_for_pair,
    hat_cover_sums,
    induced_honeycomb_pair,
    normalized_gadget_blocks,
    project_dimer,
    scalarization_from_weights,
    scalarize,
    verify_measure_preservation,
    white_block,
    white_gadget_network,
)
from multiweb.webs import iter_multiwebs

WEIGHT_NAMES = "abcdefxyu"


def bigon() -> PlanarGraph:
    """Two vertices joined by two parallel edges, n = 2."""
    vertices = [
        Vertex(0, BLACK, 2, (0, 1), 0),
        Vertex(1, WHITE, 2, (1, 0), 0),
    ]
    g = PlanarGraph(vertices, [Edge(0, 0, 1), Edge(1, 0, 1)], PLANE, {})
    g.check_valid()
    return g


def rand_mat(rng):
    return tuple(tuple(random_fraction(rng) for _ in range(2)) for _ in range(2))


def rand_weights(rng):
    return {n: Q(rng.randint(1, 9), rng.randint(1, 4)) for n in WEIGHT_NAMES}


def generic_scalarization(g, rng, slots=None):
    while True:
        conn = Connection({e.id: rand_mat(rng) for e in g.edges})
        try:
            return scalarize(g, conn, slots), conn
        except NonGenericError:
            continue


class TestWhiteGadget:
    def test_frozen_matrix(self):
        assert WHITE_GADGET_MATRIX == mat(
            [[1, 0, -1, -3, -2, -3], [0, 1, 1, 2, 1, 1]]
        )
        assert white_block(0) == identity(2)

    def test_minors_are_plain_matching_sums(self):
        # The frozen matrix is the boundary behaviour of the unit mirror
        # gadget: its 2 x 2 minors equal unsigned internal matching sums.
        net = white_gadget_network().net
        g = net.graph

        def matching_sum(covered: tuple[int, int]) -> Q:
            blacks = set(covered) | {6}
            whites = (7, 8, 9)
            total = Q(0)
            by_pair = {}
            for e in g.edges:
                by_pair[(e.white, e.black)] = net.weights[e.id]
            for perm in itertools.permutations(sorted(blacks)):
                w = Q(1)
                for white, black in zip(whites, perm):
                    w *= by_pair.get((white, black), Q(0))
                total += w
            return total

        M = WHITE_GADGET_MATRIX
        for i, j in itertools.combinations(range(6), 2):
            minor = M[0][i] * M[1][j] - M[0][j] * M[1][i]
            assert minor == matching_sum((i, j))

    def test_gadget_graph_shape(self):
        g = white_gadget_network().net.graph
        assert len(g.vertices) == 10 and len(g.edges) == 12
        assert sum(1 for v in g.vertices if v.color == BLACK) == 7


class TestBlackGadget:
    def test_unit_weight_blocks(self):
        y0, y1, y2 = black_gadget_blocks({n: Q(1) for n in WEIGHT_NAMES})
        assert y0 == mat([[1, 0], [1, 1]])
        assert y1 == mat([[0, 1], [-1, 2]])
        assert y2 == mat([[-1, 1], [-2, 1]])

    def test_unit_weights_induce_transpose_pair(self):
        A, B = induced_honeycomb_pair({n: Q(1) for n in WEIGHT_NAMES})
        assert A == mat([[11, -8], [-4, 3]])
        assert B == mat([[11, -4], [-8, 3]])

    def test_identity_pair_weights(self):
        w = gadget_weights_for_pair(identity(2), identity(2))
        third = Q(1, 3)
        assert w == {
            "a": third, "c": third,
            "b": -third, "d": -third, "e": -third, "f": -third,
            "x": Q(-3), "y": Q(3), "u": Q(3),
        }

    def test_weight_round_trip(self):
        # weights -> realized blocks -> chamber minors -> weights, exactly.
        rng = random.Random(2)
        for _ in range(10):
            w = rand_weights(rng)
            assert gadget_weights(black_gadget_blocks(w)) == w

    def test_pair_round_trip(self):
        rng = random.Random(3)
        done = 0
        while done < 10:
            A, B = rand_mat(rng), rand_mat(rng)
            try:
                w = gadget_weights_for_pair(A, B)
            except NonGenericError:
                continue
            A2, B2 = induced_honeycomb_pair(w)
            assert (A2, B2) == (mat(A), mat(B))
            done += 1

    def test_normalized_blocks_start_at_identity(self):
        rng = random.Random(4)
        y0, y1, y2 = normalized_gadget_blocks(rand_weights(rng))
        assert y0 == identity(2)

    def test_degenerate_target_raises(self):
        with pytest.raises(NonGenericError):
            gadget_weights((mat([[1, 0], [0, 0]]), identity(2), identity(2)))


class TestConstruction:
    def test_bigon_shape(self):
        rng = random.Random(5)
        s, conn = generic_scalarization(bigon(), rng)
        # Each gadget keeps 8 of 10 vertices (one capped pair gone) and 9 of
        # 12 internal edges; two parallel pairs replace the two edges.
        assert len(s.hat.vertices) == 16
        assert len(s.hat.edges) == 9 * 2 + 4
        assert sorted(s.groups) == [0, 1]
        for pair in s.groups.values():
            assert len(pair) == 2
            for eid in pair:
                assert s.weights[eid] == 1
        for vid, gauge in s.gauges.items():
            assert det(gauge) == 1

    def test_realized_is_gauge_of_target(self):
        rng = random.Random(6)
        g = bigon()
        s, conn = generic_scalarization(g, rng)
        for e in g.edges:
            gauge = s.gauges[e.black]
            assert s.realized.matrices[e.id] == mat_mul(conn.matrices[e.id], gauge)

    def test_capping_removes_stub_pairs(self):
        patch = hexagon_patch([(0, 0)])
        rng = random.Random(7)
        s, _ = generic_scalarization(patch.graph, rng, patch.slots)
        for v in patch.graph.vertices:
            placement = s.gadgets[v.id]
            assert len(placement.capped) == 1
            dead = set(SLOT_PAIRS[placement.capped[0]])
            assert dead.isdisjoint(placement.vertex_ids)
            assert len(placement.vertex_ids) == 8

    def test_hat_is_bipartite_with_unit_multiplicity(self):
        rng = random.Random(8)
        s, _ = generic_scalarization(bigon(), rng)
        for v in s.hat.vertices:
            assert v.n == 1
        for e in s.hat.edges:
            assert s.hat.vertices[e.black].color == BLACK
            assert s.hat.vertices[e.white].color == WHITE

    def test_torus_source_rejected(self):
        g = torus_graph()
        conn = Connection({e.id: identity(2) for e in g.edges})
        with pytest.raises(ScalarizationError):
            scalarize(g, conn)

    def test_missing_weights_rejected(self):
        with pytest.raises(ScalarizationError):
            scalarization_from_weights(bigon(), {})

    def test_wrong_rank_rejected(self):
        g = PlanarGraph(
            [Vertex(0, BLACK, 1, (0,), None), Vertex(1, WHITE, 1, (0,), None)],
            [Edge(0, 0, 1)],
            PLANE,
            {},
        )
        conn = Connection({0: ((Q(1),),)})
        with pytest.raises(ScalarizationError):
            scalarize(g, conn)


class TestFibers:
    def test_projection_counts_unoccupied(self):
        rng = random.Random(9)
        s, _ = generic_scalarization(bigon(), rng)
        for cover in iter_multiwebs(s.hat):
            web = project_dimer(s, cover)
            for eid, pair in s.groups.items():
                assert web[eid] == sum(1 - cover[x] for x in pair)
            # Projections are genuine 2-webs.
            for v in s.source.vertices:
                assert sum(web[e] for e in v.rotation) == 2

    def test_factorized_sums_match_direct_enumeration(self):
        rng = random.Random(10)
        s, _ = generic_scalarization(bigon(), rng)
        assert fiber_sums(s) == hat_cover_sums(s)
        patch = hexagon_patch([(0, 0)])
        s, _ = generic_scalarization(patch.graph, rng, patch.slots)
        assert fiber_sums(s) == hat_cover_sums(s)


class TestMeasurePreservation:
    def test_bigon_exact(self):
        rng = random.Random(11)
        for _ in range(3):
            s, _ = generic_scalarization(bigon(), rng)
            report = verify_measure_preservation(s)
            assert report["all_equal"]
            assert report["fiber_total"] == report["trace_total"]
            assert len(report["webs"]) == 3

    def test_doubled_edge(self):
        g = PlanarGraph(
            [Vertex(0, BLACK, 2, (0,), 0), Vertex(1, WHITE, 2, (0,), 0)],
            [Edge(0, 0, 1)],
            PLANE,
            {},
        )
        g.check_valid()
        rng = random.Random(12)
        s, conn = generic_scalarization(g, rng)
        report = verify_measure_preservation(s)
        assert report["all_equal"]
        # The only web doubles the single edge; its trace is a determinant.
        assert list(report["webs"]) == [(2,)]

    def test_single_web_record(self):
        rng = random.Random(13)
        s, _ = generic_scalarization(bigon(), rng)
        web = next(iter_multiwebs(s.source))
        record = verify_measure_preservation(s, web)
        assert record["equal"]
        assert record["fiber_sum"] == trace_multiweb(web, s.realized)

    def test_hexagon_class_slots(self):
        patch = hexagon_patch([(0, 0)])
        rng = random.Random(14)
        s, _ = generic_scalarization(patch.graph, rng, patch.slots)
        report = verify_measure_preservation(s)
        assert report["all_equal"] and len(report["webs"]) == 3

    def test_hexagon_default_slots(self):
        patch = hexagon_patch([(0, 0)])
        rng = random.Random(15)
        s, _ = generic_scalarization(patch.graph, rng)
        assert verify_measure_preservation(s)["all_equal"]

    def test_two_hexagons(self):
        patch = hexagon_patch([(0, 0), (1, 0)])
        rng = random.Random(16)
        s, _ = generic_scalarization(patch.graph, rng, patch.slots)
        report = verify_measure_preservation(s)
        assert report["all_equal"] and len(report["webs"]) == 6

    def test_positive_weights_give_positive_traces(self):
        patch = hexagon_patch([(0, 0), (1, 0)])
        rng = random.Random(17)
        blacks = [v.id for v in patch.graph.vertices if v.color == BLACK]
        for _ in range(2):
            weights = {vid: rand_weights(rng) for vid in blacks}
            s = scalarization_from_weights(patch.graph, weights, patch.slots)
            report = verify_measure_preservation(s)
            assert report["all_equal"]
            for record in report["webs"].values():
                assert record["fiber_sum"] > 0
                assert record["trace"] > 0
