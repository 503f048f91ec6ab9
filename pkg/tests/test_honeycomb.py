"""Torus honeycomb graphs, hexagon patches and the characteristic matrix."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction as Q

import pytest

from multiweb.graph import BLACK, TORUS, WHITE, trace_faces
from multiweb.honeycomb import (
    CLASS_A,
    CLASS_B,
    CLASS_I,
    E_A,
    E_B,
    E_I,
    HexPatch,
    characteristic_matrix,
    charpoly_det,
    hexagon_patch,
    honeycomb_connection,
    patch_connection,
    torus_graph,
    torus_patch,
)
from multiweb.kasteleyn import det_expanded
from multiweb.laurent import ONE, W, Z
from multiweb.linalg import det, identity, mat
from multiweb.webs import iter_multiwebs


def closed_charpoly(A, B):
    """det(Id + z A + w B) for 2x2 blocks, expanded by hand."""
    A, B = mat(A), mat(B)
    tr_a = A[0][0] + A[1][1]
    tr_b = B[0][0] + B[1][1]
    tr_a_adj_b = (
        A[0][0] * B[1][1] - A[0][1] * B[1][0] - A[1][0] * B[0][1] + A[1][1] * B[0][0]
    )
    return ONE + Z * tr_a + W * tr_b + Z * Z * det(A) + W * W * det(B) + Z * W * tr_a_adj_b


def rand_mat(rng, size=2):
    return mat(
        [[Q(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(size)] for _ in range(size)]
    )


class TestTorusGraph:
    def test_valid_with_single_hexagonal_face(self):
        g = torus_graph()
        assert g.surface == TORUS
        faces = trace_faces(g)
        assert [f.length for f in faces] == [6]
        assert len(g.vertices) - len(g.edges) + len(faces) == 0

    def test_six_multiwebs(self):
        webs = list(iter_multiwebs(torus_graph()))
        assert len(webs) == 6
        for m in webs:
            assert sum(m.multiplicities) == 2

    def test_homology_classes(self):
        g = torus_graph()
        assert g.edges[E_I].homology == (0, 0)
        assert g.edges[E_A].homology == (1, 0)
        assert g.edges[E_B].homology == (0, 1)


class TestTorusPatch:
    def test_cover_is_valid_with_pq_hexagons(self):
        g, classes = torus_patch(3, 2)
        faces = trace_faces(g)
        assert sorted(f.length for f in faces) == [6] * 6
        assert len(g.vertices) == 12 and len(g.edges) == 18
        assert sorted(classes.values()).count(CLASS_I) == 6

    def test_count_matches_exhaustive_flow_filter(self):
        # Independent oracle: try all 3^12 multiplicity vectors on the 2x2
        # cover and keep those summing to 2 around every vertex.
        g, _ = torus_patch(2, 2)
        enumerated = sum(1 for _ in iter_multiwebs(g))
        at_vertex = {v.id: v.rotation for v in g.vertices}
        brute = 0
        for m in itertools.product((0, 1, 2), repeat=len(g.edges)):
            if all(sum(m[e] for e in rot) == 2 for rot in at_vertex.values()):
                brute += 1
        assert enumerated == brute

    def test_cover_determinant_specialises_to_quotient(self):
        # On the 1x1 cover the expanded determinant must agree with the
        # quotient graph's: same fundamental domain, relabelled edges.
        rng = random.Random(3)
        A, B = rand_mat(rng), rand_mat(rng)
        g, classes = torus_patch(1, 1)
        conn = honeycomb_connection(g, A, B, classes)
        P = det_expanded(characteristic_matrix(g, conn))
        assert P == closed_charpoly(A, B)


class TestHexagonPatch:
    def test_single_hexagon(self):
        patch = hexagon_patch([(0, 0)])
        g = patch.graph
        assert len(g.vertices) == 6 and len(g.edges) == 6
        assert sorted(f.length for f in trace_faces(g)) == [6, 6]
        assert all(len(v.rotation) == 2 for v in g.vertices)
        for v in g.vertices:
            assert len(patch.unused_slots(v.id)) == 1
            assert set(patch.slots[v.id]) == set(v.rotation)

    def test_single_hexagon_has_three_2webs(self):
        webs = list(iter_multiwebs(hexagon_patch([(0, 0)]).graph))
        assert len(webs) == 3
        profile = sorted(tuple(sorted(m.multiplicities, reverse=True)) for m in webs)
        assert profile == [
            (1, 1, 1, 1, 1, 1),
            (2, 2, 2, 0, 0, 0),
            (2, 2, 2, 0, 0, 0),
        ]

    def test_two_hexagons_share_an_edge(self):
        patch = hexagon_patch([(0, 0), (1, 0)])
        g = patch.graph
        assert len(g.vertices) == 10 and len(g.edges) == 11
        trivalent = [v for v in g.vertices if len(v.rotation) == 3]
        assert len(trivalent) == 2
        for v in trivalent:
            assert patch.unused_slots(v.id) == ()

    def test_slots_follow_class_positions(self):
        patch = hexagon_patch([(0, 0), (1, 0)])
        for v in patch.graph.vertices:
            for eid, slot in patch.slots[v.id].items():
                cls = patch.classes[eid]
                if v.color == BLACK:
                    assert slot == {CLASS_I: 0, CLASS_A: 1, CLASS_B: 2}[cls]
                else:
                    assert slot == {CLASS_I: 0, CLASS_B: 1, CLASS_A: 2}[cls]

    def test_patch_connection_validates(self):
        patch = hexagon_patch([(0, 0), (0, 1), (1, 0)])
        conn = patch_connection(patch, identity(2), identity(2))
        conn.validate_for(patch.graph)

    def test_empty_patch_rejected(self):
        with pytest.raises(ValueError):
            hexagon_patch([])


class TestCharacteristicMatrix:
    def test_matches_closed_formula_on_random_blocks(self):
        rng = random.Random(7)
        for _ in range(10):
            A, B = rand_mat(rng), rand_mat(rng)
            assert charpoly_det(A, B) == closed_charpoly(A, B)

    def test_printed_unit_weight_pair(self):
        A = mat([[11, -8], [-4, 3]])
        B = mat([[11, -4], [-8, 3]])
        P = charpoly_det(A, B)
        assert P == (
            ONE + Z * 14 + W * 14 + Z * Z + W * W - Z * W * 14
        )

    def test_identity_pair_is_squared_trinomial(self):
        P = charpoly_det(identity(2), identity(2))
        assert P == (ONE + Z + W) * (ONE + Z + W)

    def test_rank_three_blocks(self):
        rng = random.Random(11)
        A, B = rand_mat(rng, 3), rand_mat(rng, 3)
        g = torus_graph(3)
        P = det_expanded(characteristic_matrix(g, honeycomb_connection(g, A, B)))
        # Spot-check on numeric substitutions against a numpy determinant.
        import numpy as np

        for z, w in [(0.3 + 0.1j, -0.7), (1.5, 2.25j)]:
            M = np.eye(3) + z * np.array(A, dtype=complex) + w * np.array(B, dtype=complex)
            assert abs(P.evaluate(z, w) - np.linalg.det(M)) < 1e-9
